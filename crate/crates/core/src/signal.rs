//! Finite-length piecewise-constant signals over `[0, len)`.
//!
//! A signal is stored as its minimal covering: contiguous left-closed,
//! right-open pieces starting at 0, ending at `len`, with no two neighbours
//! sharing a value. Boolean signals are the ones without `Unknown` pieces.

use std::fmt;

use crate::error::{Error, Result};
use crate::truth::{Logic, Truth};

/// Boundaries closer than this are treated as the same point.
pub const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub from: f64,
    pub to: f64,
    pub value: Truth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal3 {
    len: f64,
    pieces: Vec<Piece>,
}

impl Signal3 {
    /// Checked constructor: the pieces must tile `[0, len)` in order.
    pub fn new(len: f64, pieces: &[(f64, f64, Truth)]) -> Result<Self> {
        if !(len >= 0.0) || !len.is_finite() {
            return Err(Error::InvalidSignal(format!("length {len}")));
        }
        let mut at = 0.0;
        for &(from, to, _) in pieces {
            if (from - at).abs() > SNAP {
                let what = if from > at { "gap" } else { "overlap" };
                return Err(Error::InvalidSignal(format!("{what} at {at}")));
            }
            if !(to > from) {
                return Err(Error::InvalidSignal(format!("empty piece [{from},{to})")));
            }
            at = to;
        }
        if (at - len).abs() > SNAP {
            return Err(Error::InvalidSignal(format!(
                "pieces end at {at}, signal length is {len}"
            )));
        }
        Ok(Self::build(len, pieces.iter().copied()))
    }

    pub fn constant(len: f64, value: Truth) -> Self {
        Self::build(len, std::iter::once((0.0, len, value)))
    }

    /// Piece `i` holds `values[i]` on `[times[i], times[i+1])`; the last one is
    /// held for `rho`.
    pub fn from_samples(times: &[f64], values: &[Truth], rho: f64) -> Self {
        assert_eq!(times.len(), values.len());
        assert!(!times.is_empty());
        let end = times[times.len() - 1] + rho;
        let pieces = (0..times.len()).map(|i| {
            let to = times.get(i + 1).copied().unwrap_or(end);
            (times[i], to, values[i])
        });
        Self::build(end, pieces)
    }

    /// Canonicalizes a contiguous covering: slivers shorter than `SNAP` are
    /// absorbed by their left neighbour, equal neighbours merged.
    fn build(len: f64, raw: impl IntoIterator<Item = (f64, f64, Truth)>) -> Self {
        let mut pieces: Vec<Piece> = Vec::new();
        for (from, to, value) in raw {
            let from = from.max(0.0);
            let to = to.min(len);
            if to - from <= SNAP {
                if let Some(last) = pieces.last_mut() {
                    last.to = last.to.max(to);
                }
                continue;
            }
            match pieces.last_mut() {
                Some(last) if last.value == value => last.to = to,
                Some(last) => {
                    let from = last.to;
                    pieces.push(Piece { from, to, value });
                }
                None => pieces.push(Piece {
                    from: 0.0,
                    to,
                    value,
                }),
            }
        }
        if let Some(last) = pieces.last_mut() {
            last.to = len;
        }
        Signal3 { len, pieces }
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_boolean(&self) -> bool {
        self.pieces.iter().all(|p| p.value != Truth::Unknown)
    }

    pub fn value_at(&self, t: f64) -> Result<Truth> {
        if !(t >= 0.0 && t < self.len) {
            return Err(Error::OutOfRange { t, len: self.len });
        }
        let i = self.pieces.partition_point(|p| p.to <= t);
        Ok(self.pieces[i].value)
    }

    pub fn map(&self, f: impl Fn(Truth) -> Truth) -> Self {
        Self::build(
            self.len,
            self.pieces.iter().map(|p| (p.from, p.to, f(p.value))),
        )
    }

    /// `Unknown` read as `False`.
    pub fn lower(&self) -> Self {
        self.map(|v| if v == Truth::Unknown { Truth::False } else { v })
    }

    /// `Unknown` read as `True`.
    pub fn upper(&self) -> Self {
        self.map(|v| if v == Truth::Unknown { Truth::True } else { v })
    }

    /// Applies `f` interval-wise over the common refinement of both coverings.
    pub fn zip_with(&self, other: &Signal3, f: impl Fn(Truth, Truth) -> Truth) -> Result<Self> {
        if (self.len - other.len).abs() > SNAP {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        let (a, b) = (&self.pieces, &other.pieces);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut at = 0.0;
        while i < a.len() && j < b.len() {
            let end = a[i].to.min(b[j].to);
            out.push((at, end, f(a[i].value, b[j].value)));
            if a[i].to <= end + SNAP {
                i += 1;
            }
            if b[j].to <= end + SNAP {
                j += 1;
            }
            at = end;
        }
        Ok(Self::build(self.len, out))
    }

    pub fn negate(&self) -> Self {
        self.map(Truth::not)
    }

    pub fn conjoin(&self, other: &Signal3, logic: Logic) -> Result<Self> {
        self.zip_with(other, |x, y| x.and(y, logic))
    }

    pub fn disjoin(&self, other: &Signal3, logic: Logic) -> Result<Self> {
        self.zip_with(other, |x, y| x.or(y, logic))
    }

    pub fn implies(&self, other: &Signal3, logic: Logic) -> Result<Self> {
        self.zip_with(other, |x, y| x.implies(y, logic))
    }

    /// `F[a,b]`: positive and uncertain pieces are back-shifted,
    /// `[m,n) ⊖ [a,b] = [m−b, n−a)`, clipped to the signal; where a shifted
    /// uncertain piece overlaps a shifted positive one the positive wins.
    /// Windows running past the end of the signal see `False` there.
    pub fn eventually(&self, a: f64, b: f64) -> Result<Self> {
        if !(0.0 <= a && a <= b) {
            return Err(Error::InvalidInterval(a, b));
        }
        // sweep over shifted intervals tracking how many T and ⊥ cover each point
        let mut events: Vec<(f64, i32, i32)> = Vec::new();
        for p in &self.pieces {
            let (dt, du) = match p.value {
                Truth::True => (1, 0),
                Truth::Unknown => (0, 1),
                Truth::False => continue,
            };
            let from = (p.from - b).max(0.0);
            let to = (p.to - a).min(self.len);
            if to - from > SNAP {
                events.push((from, dt, du));
                events.push((to, -dt, -du));
            }
        }
        events.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out = Vec::with_capacity(events.len() + 1);
        let (mut n_true, mut n_unknown) = (0, 0);
        let mut at = 0.0;
        for (t, dt, du) in events {
            if t > at {
                out.push((at, t, level(n_true, n_unknown)));
                at = t;
            }
            n_true += dt;
            n_unknown += du;
        }
        out.push((at, self.len, level(n_true, n_unknown)));
        Ok(Self::build(self.len, out))
    }

    /// `G[a,b] = ¬F[a,b]¬`
    pub fn globally(&self, a: f64, b: f64) -> Result<Self> {
        Ok(self.negate().eventually(a, b)?.negate())
    }

    /// One signal per maximal run of non-`False` pieces, `False` elsewhere.
    pub fn decompose_unitary(&self) -> Vec<Signal3> {
        let mut units = Vec::new();
        let mut i = 0;
        while i < self.pieces.len() {
            if self.pieces[i].value == Truth::False {
                i += 1;
                continue;
            }
            let start = i;
            while i < self.pieces.len() && self.pieces[i].value != Truth::False {
                i += 1;
            }
            let run = &self.pieces[start..i];
            let (from, to) = (run[0].from, run[run.len() - 1].to);
            let pieces = std::iter::once((0.0, from, Truth::False))
                .chain(run.iter().map(|p| (p.from, p.to, p.value)))
                .chain(std::iter::once((to, self.len, Truth::False)));
            units.push(Self::build(self.len, pieces));
        }
        units
    }

    /// `s₁ U[a,b] s₂`.
    ///
    /// For a unitary left operand this is `s₁ ∧ F[a,b](s₁ ∧ s₂)`; a general
    /// left operand is split into unitary signals and the results are joined
    /// by disjunction. Under Kleene logic the three-valued result is assembled
    /// from the Boolean until of the pessimistic (`⊥ → F`) and optimistic
    /// (`⊥ → T`) readings, which keeps runs mixing `T` and `⊥` sound.
    pub fn until(&self, other: &Signal3, a: f64, b: f64, logic: Logic) -> Result<Self> {
        if !(0.0 <= a && a <= b) {
            return Err(Error::InvalidInterval(a, b));
        }
        if (self.len - other.len).abs() > SNAP {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        match logic {
            Logic::Strict => self.until_units(other, a, b, logic),
            Logic::Kleene if self.is_boolean() && other.is_boolean() => {
                self.until_units(other, a, b, logic)
            }
            Logic::Kleene => {
                let sure = self.lower().until_units(&other.lower(), a, b, logic)?;
                let maybe = self.upper().until_units(&other.upper(), a, b, logic)?;
                sure.zip_with(&maybe, |s, m| match (s, m) {
                    (Truth::True, _) => Truth::True,
                    (_, Truth::False) => Truth::False,
                    _ => Truth::Unknown,
                })
            }
        }
    }

    fn until_units(&self, other: &Signal3, a: f64, b: f64, logic: Logic) -> Result<Self> {
        let mut acc = Signal3::constant(self.len, Truth::False);
        for unit in self.decompose_unitary() {
            let reach = unit.conjoin(other, logic)?.eventually(a, b)?;
            acc = acc.disjoin(&unit.conjoin(&reach, logic)?, logic)?;
        }
        Ok(acc)
    }
}

fn level(n_true: i32, n_unknown: i32) -> Truth {
    if n_true > 0 {
        Truth::True
    } else if n_unknown > 0 {
        Truth::Unknown
    } else {
        Truth::False
    }
}

impl fmt::Display for Signal3 {
    /// `len=6 [0,1)=T [1,4)=? [4,6)=F`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "len={}", self.len)?;
        for p in &self.pieces {
            write!(f, " [{},{})={}", p.from, p.to, p.value.code())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Truth::{False as F, True as T, Unknown as U};

    fn sig(len: f64, pieces: &[(f64, f64, Truth)]) -> Signal3 {
        Signal3::new(len, pieces).unwrap()
    }

    fn minimal(s: &Signal3) -> bool {
        s.pieces
            .windows(2)
            .all(|w| w[0].value != w[1].value && w[0].to == w[1].from)
            && s.pieces.first().is_none_or(|p| p.from == 0.0)
            && s.pieces.last().is_none_or(|p| p.to == s.len)
    }

    #[test]
    fn construction() {
        let s = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, T)]);
        assert_eq!(s.pieces().len(), 1);
        let s = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, F)]);
        assert_eq!(s.pieces().len(), 2);
        assert!(Signal3::new(2.0, &[(0.0, 1.0, T), (1.5, 2.0, F)]).is_err());
        assert!(Signal3::new(2.0, &[(0.0, 1.0, T), (0.5, 2.0, F)]).is_err());
        assert!(Signal3::new(2.0, &[(0.0, 1.0, T)]).is_err());
        assert!(Signal3::new(2.0, &[(0.0, 3.0, T)]).is_err());
    }

    #[test]
    fn value_lookup() {
        let s = sig(2.0, &[(0.0, 2.0, T)]);
        assert_eq!(s.value_at(0.0).unwrap(), T);
        let s = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, F)]);
        assert_eq!(s.value_at(1.0).unwrap(), F);
        assert_eq!(s.value_at(0.999).unwrap(), T);
        assert!(matches!(s.value_at(2.0), Err(Error::OutOfRange { .. })));
        assert!(s.value_at(-0.1).is_err());
    }

    #[test]
    fn negation() {
        let s = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, F)]);
        assert_eq!(s.negate(), sig(2.0, &[(0.0, 1.0, F), (1.0, 2.0, T)]));
        let u = Signal3::constant(3.0, U);
        assert_eq!(u.negate(), u);
    }

    #[test]
    fn conjunction() {
        let a = Signal3::constant(2.0, T);
        let b = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, F)]);
        assert_eq!(a.conjoin(&b, Logic::Kleene).unwrap(), b);
        let f = Signal3::constant(2.0, F);
        let u = Signal3::constant(2.0, U);
        assert_eq!(f.conjoin(&u, Logic::Kleene).unwrap(), f);
        assert_eq!(f.conjoin(&u, Logic::Strict).unwrap(), u);
        assert_eq!(b.conjoin(&b.negate(), Logic::Kleene).unwrap(), f);
        assert!(a
            .conjoin(&Signal3::constant(3.0, T), Logic::Kleene)
            .is_err());
    }

    #[test]
    fn disjunction_and_implication() {
        let t = Signal3::constant(1.0, T);
        let u = Signal3::constant(1.0, U);
        let f = Signal3::constant(1.0, F);
        assert_eq!(t.disjoin(&u, Logic::Kleene).unwrap(), t);
        assert_eq!(f.implies(&u, Logic::Kleene).unwrap(), t);
        let b = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, F)]);
        assert_eq!(
            b.disjoin(&b.negate(), Logic::Kleene).unwrap(),
            Signal3::constant(2.0, T)
        );
    }

    #[test]
    fn eventually_examples() {
        let s = sig(6.0, &[(0.0, 3.0, F), (3.0, 5.0, T), (5.0, 6.0, F)]);
        let e = s.eventually(1.0, 2.0).unwrap();
        assert_eq!(e, sig(6.0, &[(0.0, 1.0, F), (1.0, 4.0, T), (4.0, 6.0, F)]));
        let s = sig(1.0, &[(0.0, 1.0, T)]);
        assert_eq!(s.eventually(0.0, 0.0).unwrap(), s);
        let s = sig(6.0, &[(0.0, 3.0, F), (3.0, 5.0, U), (5.0, 6.0, F)]);
        let e = s.eventually(1.0, 2.0).unwrap();
        assert_eq!(e, sig(6.0, &[(0.0, 1.0, F), (1.0, 4.0, U), (4.0, 6.0, F)]));
        assert!(s.eventually(2.0, 1.0).is_err());
    }

    #[test]
    fn eventually_prefers_true_over_unknown() {
        let s = sig(6.0, &[(0.0, 2.0, U), (2.0, 3.0, T), (3.0, 6.0, F)]);
        let e = s.eventually(0.0, 1.0).unwrap();
        assert_eq!(e, sig(6.0, &[(0.0, 1.0, U), (1.0, 3.0, T), (3.0, 6.0, F)]));
    }

    #[test]
    fn until_examples() {
        let psi = sig(6.0, &[(0.0, 3.0, F), (3.0, 5.0, T), (5.0, 6.0, F)]);
        let all = Signal3::constant(6.0, T);
        let u = all.until(&psi, 1.0, 2.0, Logic::Kleene).unwrap();
        assert_eq!(u, psi.eventually(1.0, 2.0).unwrap());
        let phi = sig(6.0, &[(0.0, 2.0, T), (2.0, 6.0, F)]);
        let u = phi.until(&psi, 1.0, 2.0, Logic::Kleene).unwrap();
        assert_eq!(u, Signal3::constant(6.0, F));
        let none = Signal3::constant(6.0, F);
        assert_eq!(phi.until(&none, 0.0, 3.0, Logic::Kleene).unwrap(), none);
    }

    #[test]
    fn until_mixed_run_is_not_overconfident() {
        // φ is uncertain on [1,2); reaching ψ at 2.5 from 0.5 must pass through it
        let phi = sig(3.0, &[(0.0, 1.0, T), (1.0, 2.0, U), (2.0, 3.0, T)]);
        let psi = sig(3.0, &[(0.0, 2.0, F), (2.0, 3.0, T)]);
        let u = phi.until(&psi, 0.0, 2.0, Logic::Kleene).unwrap();
        assert_eq!(u.value_at(0.5).unwrap(), U);
        assert_eq!(u.value_at(2.5).unwrap(), T);
    }

    #[test]
    fn unitary_decomposition() {
        let s = sig(3.0, &[(0.0, 1.0, T), (1.0, 2.0, F), (2.0, 3.0, T)]);
        let units = s.decompose_unitary();
        assert_eq!(units.len(), 2);
        assert!(Signal3::constant(3.0, F).decompose_unitary().is_empty());
        let s = sig(2.0, &[(0.0, 1.0, T), (1.0, 2.0, U)]);
        let units = s.decompose_unitary();
        assert_eq!(units, vec![s.clone()]);
    }

    #[test]
    fn sliver_boundaries_snap() {
        let a = sig(1.0, &[(0.0, 0.7, F), (0.7, 1.0, T)]);
        let b = sig(
            1.0,
            &[(0.0, 0.7000000000000001, F), (0.7000000000000001, 1.0, T)],
        );
        let c = a.conjoin(&b, Logic::Kleene).unwrap();
        assert_eq!(c.pieces().len(), 2);
        assert!(minimal(&c));
    }

    #[test]
    fn text_form() {
        let s = sig(6.0, &[(0.0, 1.0, T), (1.0, 4.0, U), (4.0, 6.0, F)]);
        assert_eq!(s.to_string(), "len=6 [0,1)=T [1,4)=? [4,6)=F");
    }

    #[test]
    fn from_samples_holds_last_value_for_rho() {
        let s = Signal3::from_samples(&[0.0, 0.5, 1.0], &[T, T, F], 0.5);
        assert_eq!(s, sig(1.5, &[(0.0, 1.0, T), (1.0, 1.5, F)]));
    }

    // Random signals on a quarter-unit grid for the property tests below.
    fn arb_signal(len_q: u32, three: bool) -> impl Strategy<Value = Signal3> {
        let vals = if three { 3 } else { 2 };
        proptest::collection::vec((1u32..=4, 0..vals), 1..=10).prop_map(move |raw| {
            let mut pieces = Vec::new();
            let mut at = 0u32;
            for (w, v) in raw {
                if at >= len_q {
                    break;
                }
                let to = (at + w).min(len_q);
                let value = [F, T, U][v as usize];
                pieces.push((at as f64 * 0.25, to as f64 * 0.25, value));
                at = to;
            }
            if at < len_q {
                pieces.push((at as f64 * 0.25, len_q as f64 * 0.25, F));
            }
            Signal3::new(len_q as f64 * 0.25, &pieces).unwrap()
        })
    }

    fn pair(three: bool) -> impl Strategy<Value = (Signal3, Signal3)> {
        (4u32..=24).prop_flat_map(move |n| (arb_signal(n, three), arb_signal(n, three)))
    }

    fn window() -> impl Strategy<Value = (f64, f64)> {
        (0u32..=8, 0u32..=8).prop_map(|(a, w)| (a as f64 * 0.25, (a + w) as f64 * 0.25))
    }

    proptest! {
        #[test]
        fn combinators_stay_minimal((s, r) in pair(true), (a, b) in window()) {
            for out in [
                s.negate(),
                s.conjoin(&r, Logic::Kleene).unwrap(),
                s.disjoin(&r, Logic::Strict).unwrap(),
                s.eventually(a, b).unwrap(),
                s.until(&r, a, b, Logic::Kleene).unwrap(),
                s.until(&r, a, b, Logic::Strict).unwrap(),
            ] {
                prop_assert!(minimal(&out), "{}", out);
            }
        }

        #[test]
        fn boolean_closure((s, r) in pair(false), (a, b) in window()) {
            prop_assert!(s.conjoin(&r, Logic::Kleene).unwrap().is_boolean());
            prop_assert!(s.eventually(a, b).unwrap().is_boolean());
            prop_assert!(s.until(&r, a, b, Logic::Kleene).unwrap().is_boolean());
            prop_assert!(s.until(&r, a, b, Logic::Strict).unwrap().is_boolean());
        }

        #[test]
        fn negation_is_an_involution(s in arb_signal(16, true)) {
            prop_assert_eq!(s.negate().negate(), s);
        }

        #[test]
        fn unitary_parts_recompose(s in arb_signal(20, true)) {
            let mut acc = Signal3::constant(s.len(), F);
            for u in s.decompose_unitary() {
                prop_assert!(u.decompose_unitary().len() == 1);
                acc = acc.disjoin(&u, Logic::Kleene).unwrap();
            }
            prop_assert_eq!(acc, s);
        }

        #[test]
        fn common_refinement_refines_both((s, r) in pair(true)) {
            let refined = s.zip_with(&r, |x, _| x).unwrap();
            prop_assert_eq!(&refined, &s);
            // every piece of the raw product lies inside one piece of each input
            let prod = s.zip_with(&r, |x, y| if x == y { x } else { U }).unwrap();
            for p in prod.pieces() {
                let mid = 0.5 * (p.from + p.to);
                let inside = |q: &Signal3| q.pieces().iter().any(|qp| qp.from <= p.from && p.to <= qp.to
                    || (qp.from <= mid && mid < qp.to));
                prop_assert!(inside(&s) && inside(&r));
            }
        }

        #[test]
        fn kleene_monotone((s, r) in pair(true), (a, b) in window(), pick in any::<bool>()) {
            // resolve every ⊥ of s one way; definite outputs must not flip
            let fixed = s.map(|v| if v == U { Truth::from_bool(pick) } else { v });
            let before = [
                s.conjoin(&r, Logic::Kleene).unwrap(),
                s.eventually(a, b).unwrap(),
                s.until(&r, a, b, Logic::Kleene).unwrap(),
                r.until(&s, a, b, Logic::Kleene).unwrap(),
            ];
            let after = [
                fixed.conjoin(&r, Logic::Kleene).unwrap(),
                fixed.eventually(a, b).unwrap(),
                fixed.until(&r, a, b, Logic::Kleene).unwrap(),
                r.until(&fixed, a, b, Logic::Kleene).unwrap(),
            ];
            for (x, y) in before.iter().zip(&after) {
                for k in 0..200 {
                    let t = (k as f64 + 0.5) * s.len() / 200.0;
                    let (vx, vy) = (x.value_at(t).unwrap(), y.value_at(t).unwrap());
                    prop_assert!(!vx.is_definite() || vx == vy, "t={} {:?} -> {:?}", t, vx, vy);
                }
            }
        }
    }
}
