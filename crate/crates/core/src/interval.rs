//! Closed real intervals for conservative range evaluation.
//!
//! Every operation returns an interval that contains the exact image of its
//! operands. Tightness is not attempted beyond the usual endpoint formulas.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan());
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// `None` when the divisor straddles or touches zero.
    pub fn checked_div(self, rhs: Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let inv = Interval::new(1.0 / rhs.hi, 1.0 / rhs.lo);
        Some(self * inv)
    }

    /// Integer power, tight for the even case around zero.
    pub fn powi(self, k: u32) -> Interval {
        match k {
            0 => Interval::point(1.0),
            1 => self,
            _ => {
                let a = self.lo.powi(k as i32);
                let b = self.hi.powi(k as i32);
                if k % 2 == 1 {
                    Interval::new(a, b)
                } else if self.contains_zero() {
                    Interval::new(0.0, a.max(b))
                } else {
                    Interval::new(a.min(b), a.max(b))
                }
            }
        }
    }

    pub fn scale(self, c: f64) -> Interval {
        if c >= 0.0 {
            Interval::new(self.lo * c, self.hi * c)
        } else {
            Interval::new(self.hi * c, self.lo * c)
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn division_by_straddling_interval() {
        let a = Interval::new(1.0, 2.0);
        assert!(a.checked_div(Interval::new(-1.0, 1.0)).is_none());
        assert!(a.checked_div(Interval::new(0.0, 1.0)).is_none());
        let q = a.checked_div(Interval::new(2.0, 4.0)).unwrap();
        assert_eq!(q, Interval::new(0.25, 1.0));
    }

    #[test]
    fn even_power_around_zero() {
        assert_eq!(Interval::new(-2.0, 1.0).powi(2), Interval::new(0.0, 4.0));
        assert_eq!(Interval::new(-2.0, -1.0).powi(2), Interval::new(1.0, 4.0));
        assert_eq!(Interval::new(-2.0, 1.0).powi(3), Interval::new(-8.0, 1.0));
    }

    fn iv() -> impl Strategy<Value = Interval> {
        (-10.0f64..10.0, 0.0f64..5.0).prop_map(|(lo, w)| Interval::new(lo, lo + w))
    }

    proptest! {
        #[test]
        fn ops_enclose_pointwise(a in iv(), b in iv(), s in 0.0f64..=1.0, u in 0.0f64..=1.0, k in 0u32..5) {
            let x = a.lo + s * (a.hi - a.lo);
            let y = b.lo + u * (b.hi - b.lo);
            prop_assert!((a + b).contains(x + y));
            prop_assert!((a - b).contains(x - y));
            prop_assert!((a * b).contains(x * y));
            prop_assert!(a.powi(k).contains(x.powi(k as i32)));
            if let Some(q) = a.checked_div(b) {
                let v = x / y;
                prop_assert!(q.lo <= v + 1e-9 * v.abs() && v - 1e-9 * v.abs() <= q.hi);
            }
        }
    }
}
