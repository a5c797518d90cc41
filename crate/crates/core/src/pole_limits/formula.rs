use std::fmt;

use crate::error::{LabError, Result};

/// Which limit identity an evaluation refers to.
///
/// `Heart(n)` is the pole limit at -n (with `Heart(1)` and `Heart(2)` the
/// first two worked cases), `Spade(n)` the two-sided ratio limit for n >= 1,
/// `Diamond` its n = 0 companion, and `Unified(n)` the single formula that
/// dispatches between them through the selector symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    /// x - Γ(1/x) as x → ∞
    Demys,
    /// 1/x - Γ(x) as x → 0
    Clubsuit,
    Heart(u32),
    Spade(u32),
    Diamond,
    Unified(u32),
}

impl FormulaId {
    /// All formula names accepted by [`FormulaId::from_name`].
    pub const NAMES: [&'static str; 6] = ["demys", "clubsuit", "heart", "spade", "diamond", "unified"];

    pub fn name(&self) -> &'static str {
        match self {
            FormulaId::Demys => "demys",
            FormulaId::Clubsuit => "clubsuit",
            FormulaId::Heart(_) => "heart",
            FormulaId::Spade(_) => "spade",
            FormulaId::Diamond => "diamond",
            FormulaId::Unified(_) => "unified",
        }
    }

    /// The family index n, for the indexed families.
    pub fn index(&self) -> Option<u32> {
        match self {
            FormulaId::Heart(n) | FormulaId::Spade(n) | FormulaId::Unified(n) => Some(*n),
            _ => None,
        }
    }

    /// True for the indexed families.
    pub fn is_indexed(name: &str) -> bool {
        matches!(name, "heart" | "spade" | "unified")
    }

    /// Builds a formula from its name and optional index. Unindexed formulas
    /// reject an index; `spade` requires n >= 1.
    pub fn from_name(name: &str, n: Option<u32>) -> Result<Self> {
        let f = match (name, n) {
            ("demys", None) => FormulaId::Demys,
            ("clubsuit", None) => FormulaId::Clubsuit,
            ("diamond", None) => FormulaId::Diamond,
            ("heart", Some(n)) => FormulaId::Heart(n),
            ("spade", Some(n)) => FormulaId::Spade(n),
            ("unified", Some(n)) => FormulaId::Unified(n),
            ("demys" | "clubsuit" | "diamond", Some(_)) => {
                return Err(LabError::Input(format!("formula {name} takes no index")))
            }
            ("heart" | "spade" | "unified", None) => {
                return Err(LabError::Input(format!("formula {name} needs an index n")))
            }
            _ => return Err(LabError::Input(format!("unknown formula {name:?}"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FormulaId::Spade(0) => Err(LabError::Input("spade is defined for n >= 1; use diamond for n = 0".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(n) => write!(f, "{}({n})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// χ, δ and ε evaluated at (n, 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectorSymbols {
    /// 0 if n = 0, else 1
    pub chi: u8,
    /// Kronecker delta: 1 if n = 0, else 0
    pub delta: u8,
    /// -1 if n = 0, else +1
    pub epsilon: i8,
}

pub fn selector(n: u32) -> SelectorSymbols {
    if n == 0 {
        SelectorSymbols { chi: 0, delta: 1, epsilon: -1 }
    } else {
        SelectorSymbols { chi: 1, delta: 0, epsilon: 1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_values() {
        assert_eq!(selector(0), SelectorSymbols { chi: 0, delta: 1, epsilon: -1 });
        assert_eq!(selector(1), SelectorSymbols { chi: 1, delta: 0, epsilon: 1 });
        assert_eq!(selector(7), SelectorSymbols { chi: 1, delta: 0, epsilon: 1 });
    }

    #[test]
    fn names_round_trip() {
        for f in [
            FormulaId::Demys,
            FormulaId::Clubsuit,
            FormulaId::Heart(3),
            FormulaId::Spade(2),
            FormulaId::Diamond,
            FormulaId::Unified(0),
        ] {
            assert_eq!(FormulaId::from_name(f.name(), f.index()).unwrap(), f);
        }
    }

    #[test]
    fn spade_requires_positive_index() {
        assert!(FormulaId::from_name("spade", Some(0)).is_err());
        assert!(FormulaId::from_name("heart", None).is_err());
        assert!(FormulaId::from_name("clubsuit", Some(1)).is_err());
        assert!(FormulaId::from_name("club", None).is_err());
    }
}
