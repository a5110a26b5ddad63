use super::{BrokenEllipticSurface, SurfaceError};
use crate::fiber::{canonical_contribution, intersection_data, FiberModelState};
use crate::rational::Rational;

/// `(K_X + S + F_A)^2` for an irreducible surface whose marked fibers are all
/// Weierstrass or intermediate.
///
/// With `k = 2g - 2 + deg L` the divisor is numerically
/// `(k + sum a_i) F + S + sum_j beta_j E_j` where `beta_j = 1 + alpha_j - a_j m_j`
/// runs over intermediate fibers.
pub fn volume(x: &BrokenEllipticSurface) -> Result<Rational, SurfaceError> {
    let unsupported = |why: &str| Err(SurfaceError::UnsupportedConfiguration(why.to_string()));
    if x.elliptic.len() != 1 || !x.pseudo2.is_empty() || !x.trees.is_empty() {
        return unsupported("volume needs a single elliptic component");
    }
    let c = &x.elliptic[0];
    if !c.attach.is_empty() {
        return unsupported("volume needs a component without attach fibers");
    }
    if c.section_contracted {
        return unsupported("volume needs an uncontracted section");
    }
    let k = Rational::int(2 * c.genus as i128 - 2) + c.deg_l;
    let mut total_a = Rational::ZERO;
    let mut local = Rational::ZERO;
    for f in &c.fibers {
        total_a += f.coeff;
        match f.state {
            FiberModelState::Weierstrass => {}
            FiberModelState::Intermediate => {
                let d = intersection_data(f.ftype)?;
                let alpha = canonical_contribution(f.ftype, f.state);
                let beta = Rational::ONE + alpha - f.coeff * Rational::int(d.multiplicity as i128);
                local += beta * beta * d.e_squared;
            }
            FiberModelState::Twisted => return unsupported("volume does not cover twisted fibers"),
        }
    }
    Ok(Rational::int(2) * (k + total_a) - c.deg_l + local)
}
