use std::fmt;

/// Three-valued truth: `Unknown` is the uncertain value ⊥.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth {
    False,
    Unknown,
    True,
}

/// Which conjunction table to use when one side is uncertain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Logic {
    /// Kleene strong tables: `False ∧ ⊥ = False`, `True ∨ ⊥ = True`.
    #[default]
    Kleene,
    /// Any uncertain operand makes the result uncertain.
    Strict,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn is_definite(self) -> bool {
        self != Truth::Unknown
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn and(self, other: Self, logic: Logic) -> Self {
        match logic {
            Logic::Kleene => self.min(other),
            Logic::Strict => {
                if self == Truth::Unknown || other == Truth::Unknown {
                    Truth::Unknown
                } else {
                    self.min(other)
                }
            }
        }
    }

    pub fn or(self, other: Self, logic: Logic) -> Self {
        self.not().and(other.not(), logic).not()
    }

    pub fn implies(self, other: Self, logic: Logic) -> Self {
        self.not().or(other, logic)
    }

    /// Single-character code used in signal reports.
    pub fn code(self) -> char {
        match self {
            Truth::True => 'T',
            Truth::False => 'F',
            Truth::Unknown => '?',
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        Truth::from_bool(b)
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truth::True => f.write_str("True"),
            Truth::False => f.write_str("False"),
            Truth::Unknown => f.write_str("unknown"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Truth; 3] = [Truth::False, Truth::Unknown, Truth::True];

    // Kleene tables written out by hand.
    fn kleene_and(a: Truth, b: Truth) -> Truth {
        use Truth::*;
        match (a, b) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    fn kleene_or(a: Truth, b: Truth) -> Truth {
        use Truth::*;
        match (a, b) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Unknown,
        }
    }

    #[test]
    fn kleene_tables() {
        for a in ALL {
            for b in ALL {
                assert_eq!(a.and(b, Logic::Kleene), kleene_and(a, b));
                assert_eq!(a.or(b, Logic::Kleene), kleene_or(a, b));
            }
        }
        assert_eq!(Truth::True.or(Truth::Unknown, Logic::Kleene), Truth::True);
        assert_eq!(
            Truth::False.and(Truth::Unknown, Logic::Kleene),
            Truth::False
        );
    }

    #[test]
    fn strict_tables() {
        for a in ALL {
            assert_eq!(a.and(Truth::Unknown, Logic::Strict), Truth::Unknown);
            assert_eq!(Truth::Unknown.or(a, Logic::Strict), Truth::Unknown);
        }
        assert_eq!(Truth::True.and(Truth::False, Logic::Strict), Truth::False);
    }

    #[test]
    fn false_implies_anything() {
        for b in ALL {
            assert_eq!(Truth::False.implies(b, Logic::Kleene), Truth::True);
        }
    }
}
