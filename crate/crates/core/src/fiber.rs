//! Kodaira fiber types, log canonical thresholds and the local models of a
//! marked fiber `F_a` as the coefficient `a` varies in `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{q, Rational};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaFiberType {
    /// Smooth fiber.
    I0,
    /// Nodal cycle of `n >= 1` rational curves.
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IIStar,
    IIIStar,
    IVStar,
    /// Non-reduced types supported by the isotrivial j = infinity analysis.
    N0,
    N1,
    /// Representable, but every threshold query rejects it.
    N2,
}

use KodairaFiberType as K;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum FiberModelState {
    Weierstrass,
    Intermediate,
    Twisted,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct IntersectionData {
    pub a_squared: Rational,
    pub e_squared: Rational,
    pub a_dot_e: Rational,
    /// Multiplicity of the exceptional curve `E` in the fiber.
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiberError {
    #[error("fiber type {0} is not supported")]
    UnsupportedType(KodairaFiberType),
    #[error("fiber type {0} has no intermediate model")]
    NoIntermediateModel(KodairaFiberType),
    #[error("intersection data for {0} is not tabulated")]
    Untabulated(KodairaFiberType),
    #[error("coefficient {0} lies outside [0, 1]")]
    CoefficientOutOfRange(Rational),
    #[error("invalid fiber type {0:?}")]
    Parse(String),
}

impl KodairaFiberType {
    pub const ALL_THRESHOLDED: [KodairaFiberType; 8] =
        [K::II, K::III, K::IV, K::IIStar, K::IIIStar, K::IVStar, K::IStar(0), K::N1];

    /// Types for which the twisted model has a tabulated intersection matrix.
    pub const TABULATED: [KodairaFiberType; 7] = [K::IStar(0), K::II, K::III, K::IV, K::IIStar, K::IIIStar, K::IVStar];

    /// Stable types (`I_n`, smooth, `N0`) never leave Weierstrass form.
    pub fn is_stable(self) -> bool {
        matches!(self, K::I0 | K::I(_) | K::N0)
    }
}

impl fmt::Display for KodairaFiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K::I0 => write!(f, "I0"),
            K::I(n) => write!(f, "I{n}"),
            K::II => write!(f, "II"),
            K::III => write!(f, "III"),
            K::IV => write!(f, "IV"),
            K::IStar(n) => write!(f, "I*{n}"),
            K::IIStar => write!(f, "II*"),
            K::IIIStar => write!(f, "III*"),
            K::IVStar => write!(f, "IV*"),
            K::N0 => write!(f, "N0"),
            K::N1 => write!(f, "N1"),
            K::N2 => write!(f, "N2"),
        }
    }
}

impl fmt::Debug for KodairaFiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for KodairaFiberType {
    type Err = FiberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let fixed = match t {
            "I0" => Some(K::I0),
            "II" => Some(K::II),
            "III" => Some(K::III),
            "IV" => Some(K::IV),
            "II*" => Some(K::IIStar),
            "III*" => Some(K::IIIStar),
            "IV*" => Some(K::IVStar),
            "N0" => Some(K::N0),
            "N1" => Some(K::N1),
            "N2" => Some(K::N2),
            _ => None,
        };
        if let Some(k) = fixed {
            return Ok(k);
        }
        let err = || FiberError::Parse(t.to_string());
        if let Some(n) = t.strip_prefix("I*") {
            return n.parse().map(K::IStar).map_err(|_| err());
        }
        if let Some(n) = t.strip_prefix('I') {
            let n: u32 = n.parse().map_err(|_| err())?;
            if n == 0 {
                return Ok(K::I0);
            }
            return Ok(K::I(n));
        }
        Err(err())
    }
}

impl Serialize for KodairaFiberType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KodairaFiberType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Log canonical threshold `a0` of `(X, S + F)` at a twisted fiber of type `t`.
///
/// `Ok(None)` means the fiber is always in Weierstrass form.
pub fn lct_threshold(t: KodairaFiberType) -> Result<Option<Rational>, FiberError> {
    Ok(match t {
        K::I0 | K::I(_) | K::N0 => None,
        K::II => Some(q(5, 6)),
        K::III => Some(q(3, 4)),
        K::IV => Some(q(2, 3)),
        K::N1 => Some(q(1, 2)),
        K::IIStar => Some(q(1, 6)),
        K::IIIStar => Some(q(1, 4)),
        K::IVStar => Some(q(1, 3)),
        K::IStar(_) => Some(q(1, 2)),
        K::N2 => return Err(FiberError::UnsupportedType(t)),
    })
}

/// The model of a fiber of type `t` carrying coefficient `a`.
///
/// `a <= a0` is Weierstrass (the threshold itself included), `a0 < a < 1`
/// Intermediate and `a = 1` Twisted.
pub fn fiber_model_at(t: KodairaFiberType, a: Rational) -> Result<FiberModelState, FiberError> {
    if !a.in_unit_interval() {
        return Err(FiberError::CoefficientOutOfRange(a));
    }
    let Some(a0) = lct_threshold(t)? else {
        return Ok(FiberModelState::Weierstrass);
    };
    Ok(if a <= a0 {
        FiberModelState::Weierstrass
    } else if a < Rational::ONE {
        FiberModelState::Intermediate
    } else {
        FiberModelState::Twisted
    })
}

/// Intersection numbers of the reduced component `A` and the exceptional
/// curve `E` of the intermediate model, with the multiplicity of `E`.
pub fn intersection_data(t: KodairaFiberType) -> Result<IntersectionData, FiberError> {
    let row = |a2: Rational, e2: Rational, ae: Rational, m: u32| IntersectionData {
        a_squared: a2,
        e_squared: e2,
        a_dot_e: ae,
        multiplicity: m,
    };
    Ok(match t {
        K::IStar(_) => row(q(-2, 1), q(-1, 2), q(1, 1), 2),
        K::II => row(q(-6, 1), q(-1, 6), q(1, 1), 6),
        K::III => row(q(-4, 1), q(-1, 4), q(1, 1), 4),
        K::IV => row(q(-3, 1), q(-1, 3), q(1, 1), 3),
        K::IIStar => row(q(-6, 5), q(-1, 30), q(1, 5), 6),
        K::IIIStar => row(q(-4, 3), q(-1, 12), q(1, 3), 4),
        K::IVStar => row(q(-3, 2), q(-1, 6), q(1, 2), 3),
        K::I0 | K::I(_) | K::N0 => return Err(FiberError::NoIntermediateModel(t)),
        K::N1 => return Err(FiberError::Untabulated(t)),
        K::N2 => return Err(FiberError::UnsupportedType(t)),
    })
}

/// Coefficient of `E` contributed to the canonical class by a fiber of type
/// `t` in state `state`. Only II, III and IV outside Weierstrass form contribute.
pub fn canonical_contribution(t: KodairaFiberType, state: FiberModelState) -> Rational {
    if state == FiberModelState::Weierstrass {
        return Rational::ZERO;
    }
    match t {
        K::II => Rational::int(4),
        K::III => Rational::int(2),
        K::IV => Rational::int(1),
        _ => Rational::ZERO,
    }
}

/// Recomputes `a0` from the intersection data by solving
/// `alpha * E^2 + a * (A.E) + E^2 = 0` for `a`.
pub fn verify_threshold(t: KodairaFiberType) -> Result<Rational, FiberError> {
    let d = intersection_data(t)?;
    let alpha = canonical_contribution(t, FiberModelState::Intermediate);
    Ok(-(alpha * d.e_squared + d.e_squared) / d.a_dot_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thresholds_match_table() {
        let expect = [
            (K::II, q(5, 6)),
            (K::III, q(3, 4)),
            (K::IV, q(2, 3)),
            (K::N1, q(1, 2)),
            (K::IIStar, q(1, 6)),
            (K::IIIStar, q(1, 4)),
            (K::IVStar, q(1, 3)),
            (K::IStar(0), q(1, 2)),
            (K::IStar(4), q(1, 2)),
        ];
        for (t, a0) in expect {
            assert_eq!(lct_threshold(t).unwrap(), Some(a0), "{t}");
        }
        assert_eq!(lct_threshold(K::I(3)).unwrap(), None);
        assert_eq!(lct_threshold(K::I0).unwrap(), None);
        assert_eq!(lct_threshold(K::N0).unwrap(), None);
        assert_eq!(lct_threshold(K::N2), Err(FiberError::UnsupportedType(K::N2)));
    }

    #[test]
    fn model_states() {
        assert_eq!(fiber_model_at(K::II, q(9, 10)).unwrap(), FiberModelState::Intermediate);
        assert_eq!(fiber_model_at(K::II, q(5, 6)).unwrap(), FiberModelState::Weierstrass);
        assert_eq!(fiber_model_at(K::II, Rational::ONE).unwrap(), FiberModelState::Twisted);
        assert_eq!(fiber_model_at(K::I(1), Rational::ONE).unwrap(), FiberModelState::Weierstrass);
        assert!(fiber_model_at(K::II, q(7, 6)).is_err());
    }

    #[test]
    fn table_rows_are_consistent() {
        // F = A + mE is numerically trivial: F.E = 0 and F.A = 0.
        for t in KodairaFiberType::TABULATED {
            let d = intersection_data(t).unwrap();
            let m = Rational::int(d.multiplicity as i128);
            assert_eq!(d.a_dot_e + m * d.e_squared, Rational::ZERO, "{t} F.E");
            assert_eq!(d.a_squared + m * d.a_dot_e, Rational::ZERO, "{t} F.A");
        }
    }

    #[test]
    fn thresholds_rederive() {
        for t in KodairaFiberType::TABULATED {
            assert_eq!(Some(verify_threshold(t).unwrap()), lct_threshold(t).unwrap(), "{t}");
        }
        assert_eq!(verify_threshold(K::I(2)), Err(FiberError::NoIntermediateModel(K::I(2))));
    }

    #[test]
    fn canonical_contribution_values() {
        assert_eq!(canonical_contribution(K::II, FiberModelState::Twisted), Rational::int(4));
        assert_eq!(canonical_contribution(K::III, FiberModelState::Intermediate), Rational::int(2));
        assert_eq!(canonical_contribution(K::IV, FiberModelState::Intermediate), Rational::ONE);
        assert_eq!(canonical_contribution(K::II, FiberModelState::Weierstrass), Rational::ZERO);
        assert_eq!(canonical_contribution(K::IIStar, FiberModelState::Twisted), Rational::ZERO);
    }

    #[test]
    fn type_names_roundtrip() {
        for s in ["I0", "I3", "II", "III", "IV", "I*0", "I*2", "II*", "III*", "IV*", "N0", "N1", "N2"] {
            let t: KodairaFiberType = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert!("V".parse::<KodairaFiberType>().is_err());
        assert!("I*x".parse::<KodairaFiberType>().is_err());
    }

    fn any_type() -> impl Strategy<Value = KodairaFiberType> {
        prop_oneof![
            Just(K::I0),
            (1u32..20).prop_map(K::I),
            Just(K::II),
            Just(K::III),
            Just(K::IV),
            (0u32..10).prop_map(K::IStar),
            Just(K::IIStar),
            Just(K::IIIStar),
            Just(K::IVStar),
            Just(K::N0),
            Just(K::N1),
        ]
    }

    proptest! {
        #[test]
        fn state_is_monotone_in_coefficient(t in any_type(), n1 in 0i128..=60, n2 in 0i128..=60) {
            let (lo, hi) = if n1 <= n2 { (n1, n2) } else { (n2, n1) };
            let s_lo = fiber_model_at(t, q(lo, 60)).unwrap();
            let s_hi = fiber_model_at(t, q(hi, 60)).unwrap();
            prop_assert!(s_lo <= s_hi);
            if let Some(a0) = lct_threshold(t).unwrap() {
                prop_assert!(a0 > Rational::ZERO && a0 < Rational::ONE);
            } else {
                prop_assert_eq!(s_hi, FiberModelState::Weierstrass);
            }
        }
    }
}
