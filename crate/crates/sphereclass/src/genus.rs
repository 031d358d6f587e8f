//! Adjunction-type invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::dmgroup::is_reduced;
use crate::lattice::{ser_bigint, Class, LatticeError, Manifold, RationalClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("K.A + A.A = {0} is odd; K is not characteristic")]
    Parity(BigInt),
    #[error("class {0} is not reduced; reduce it first")]
    NotReduced(String),
    #[error("the zero class has no genus")]
    ZeroClass,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusReport {
    #[serde(serialize_with = "ser_bigint")]
    pub eta_k: BigInt,
    pub k_used: Class,
    #[serde(serialize_with = "ser_bigint")]
    pub g_omega: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub gt_dim_k: BigInt,
    pub sphere_bound_ok: bool,
}

fn halve(v: BigInt) -> Result<BigInt, GenusError> {
    if v.is_odd() {
        return Err(GenusError::Parity(v));
    }
    Ok(v / 2)
}

/// `(K.A + A.A)/2 + 1`.
pub fn eta_k(a: &Class, k: &Class, m: &Manifold) -> Result<BigInt, GenusError> {
    a.check(m)?;
    k.check(m)?;
    Ok(halve(k.dot(a) + a.dot(a))? + 1)
}

/// Same value as [`eta_k`], for a chosen symplectic canonical class.
pub fn g_omega(a: &Class, k_omega: &Class, m: &Manifold) -> Result<BigInt, GenusError> {
    eta_k(a, k_omega, m)
}

/// `(A.A - K.A)/2`.
pub fn gt_dim(a: &Class, k_omega: &Class, m: &Manifold) -> Result<BigInt, GenusError> {
    a.check(m)?;
    k_omega.check(m)?;
    halve(a.dot(a) - k_omega.dot(a))
}

fn require_reduced(a: &RationalClass) -> Result<(), GenusError> {
    if !is_reduced(a) {
        return Err(GenusError::NotReduced(a.to_string()));
    }
    Ok(())
}

/// Symplectic genus of a reduced nonzero class, realized by `K_st`.
pub fn symplectic_genus_reduced(a: &RationalClass) -> Result<BigInt, GenusError> {
    require_reduced(a)?;
    if a.is_zero() {
        return Err(GenusError::ZeroClass);
    }
    let k = RationalClass::canonical_std(a.k());
    Ok(halve(k.dot(a) + a.square())? + 1)
}

/// `K_st.A <= -2 - A.A` for a reduced class.
pub fn sphere_k_bound(a: &RationalClass) -> Result<bool, GenusError> {
    require_reduced(a)?;
    let k = RationalClass::canonical_std(a.k());
    Ok(k.dot(a) <= -a.square() - 2)
}

/// All invariants of `a` with respect to `k`.
pub fn report(a: &Class, k: &Class, m: &Manifold) -> Result<GenusReport, GenusError> {
    let eta = eta_k(a, k, m)?;
    Ok(GenusReport {
        eta_k: eta.clone(),
        k_used: k.clone(),
        g_omega: eta,
        gt_dim_k: gt_dim(a, k, m)?,
        sphere_bound_ok: k.dot(a) <= -a.dot(a) - 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RuledClass;

    fn r(a: i64, b: &[i64]) -> RationalClass {
        RationalClass::from_i64(a, b)
    }

    fn kst(k: usize) -> Class {
        Class::Rational(RationalClass::canonical_std(k))
    }

    #[test]
    fn eta_examples() {
        let m = Manifold::rational(5);
        let a = Class::Rational(r(1, &[1, 1, 1, 1, 1]));
        assert_eq!(eta_k(&a, &kst(5), &m).unwrap(), BigInt::from(0));
        let m9 = Manifold::rational(9);
        assert_eq!(eta_k(&kst(9), &kst(9), &m9).unwrap(), BigInt::from(1));
        let e1 = Class::Rational(RationalClass::exceptional(5, 1));
        assert_eq!(eta_k(&e1, &kst(5), &m).unwrap(), BigInt::from(0));
        assert_eq!(g_omega(&e1, &kst(5), &m).unwrap(), BigInt::from(0));
    }

    #[test]
    fn parity_error() {
        let m = Manifold::rational(1);
        let a = Class::Rational(r(1, &[0]));
        let k = Class::Rational(r(0, &[0]));
        assert!(matches!(eta_k(&a, &k, &m), Err(GenusError::Parity(_))));
    }

    #[test]
    fn gt_dim_examples() {
        let m = Manifold::rational(1);
        let e1 = Class::Rational(RationalClass::exceptional(1, 1));
        let h = Class::Rational(RationalClass::line(1));
        assert_eq!(gt_dim(&e1, &kst(1), &m).unwrap(), BigInt::from(0));
        assert_eq!(gt_dim(&h, &kst(1), &m).unwrap(), BigInt::from(2));
        let m9 = Manifold::rational(9);
        assert_eq!(gt_dim(&kst(9), &kst(9), &m9).unwrap(), BigInt::from(0));
    }

    #[test]
    fn reduced_genus_examples() {
        assert_eq!(
            symplectic_genus_reduced(&r(4, &[1; 9])).unwrap(),
            BigInt::from(3)
        );
        for a in 2..30 {
            let mut b = vec![a; 9];
            b.push(2);
            let c = r(3 * a, &b);
            assert_eq!(symplectic_genus_reduced(&c).unwrap(), BigInt::from(0));
            assert!(sphere_k_bound(&c).unwrap());
        }
        assert_eq!(
            symplectic_genus_reduced(&r(0, &[0, 0, 0])),
            Err(GenusError::ZeroClass)
        );
        assert!(matches!(
            symplectic_genus_reduced(&r(1, &[2, 1])),
            Err(GenusError::NotReduced(_))
        ));
    }

    #[test]
    fn k_bound_examples() {
        assert!(!sphere_k_bound(&r(4, &[1; 9])).unwrap());
        assert!(!sphere_k_bound(&r(0, &[0; 10])).unwrap());
    }

    #[test]
    fn ruled_report() {
        let m = Manifold::ruled(2, 3).unwrap();
        let a = Class::Ruled(RuledClass::from_i64(0, 1, &[-1, -1, -1]));
        let k = Class::canonical_std(&m);
        let rep = report(&a, &k, &m).unwrap();
        assert_eq!(rep.eta_k, BigInt::from(0));
        assert_eq!(rep.gt_dim_k, BigInt::from(-2));
        assert!(rep.sphere_bound_ok);
    }
}
