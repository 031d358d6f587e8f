//! Generators for classes known to carry embedded spheres.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Class, LatticeError, RationalClass, RuledClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("family parameter a = {0} must be at least 2")]
    SmallA(i64),
    #[error("perturbation k_{index} = {value} outside 0..={max}")]
    Perturbation { index: usize, value: i64, max: i64 },
    #[error("perturbing requires a > 2")]
    PerturbNeedsA3,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `(3a; a x 9, 2)` on `CP^2 # 10`.
pub fn family_type3(a: i64) -> Result<RationalClass, ConstructError> {
    if a < 2 {
        return Err(ConstructError::SmallA(a));
    }
    let mut b = vec![a; 9];
    b.push(2);
    Ok(RationalClass::from_i64(3 * a, &b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub a: i64,
    pub k_perturb: [i64; 9],
}

impl FamilyParams {
    pub fn new(a: i64, k_perturb: [i64; 9]) -> Result<Self, ConstructError> {
        if a < 2 {
            return Err(ConstructError::SmallA(a));
        }
        for (i, &v) in k_perturb.iter().enumerate() {
            if !(0..=a - 2).contains(&v) {
                return Err(ConstructError::Perturbation {
                    index: i + 1,
                    value: v,
                    max: a - 2,
                });
            }
        }
        if a == 2 && k_perturb.iter().any(|&v| v > 0) {
            return Err(ConstructError::PerturbNeedsA3);
        }
        Ok(FamilyParams { a, k_perturb })
    }

    /// `N_i = k_i (2a - k_i - 1) / 2`.
    pub fn n_i(&self) -> [i64; 9] {
        self.k_perturb.map(|k| {
            let twice = k * (2 * self.a - k - 1);
            assert_eq!(twice % 2, 0, "k(2a-k-1) is even");
            twice / 2
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularFamily {
    pub params: FamilyParams,
    pub n: [i64; 9],
    pub m: usize,
    pub class: RationalClass,
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub square: BigInt,
}

/// `3aH - sum (a - k_i) E_i - 2 E_10 - 2 (E_11 + .. + E_m)` with
/// `m = 10 + sum N_i`.
///
/// # Panics
/// If the square differs from `sum [k_i^2 - 2 k_i (a-1)] - 4`.
pub fn singular_family(p: &FamilyParams) -> SingularFamily {
    let n = p.n_i();
    let m = 10 + n.iter().sum::<i64>() as usize;
    let mut b: Vec<i64> = p.k_perturb.iter().map(|k| p.a - k).collect();
    b.resize(m, 2);
    let class = RationalClass::from_i64(3 * p.a, &b);
    let square = class.square();
    let expected: i64 = p
        .k_perturb
        .iter()
        .map(|&k| k * k - 2 * k * (p.a - 1))
        .sum::<i64>()
        - 4;
    assert_eq!(square, BigInt::from(expected), "square formula");
    SingularFamily {
        params: p.clone(),
        n,
        m,
        class,
        square,
    }
}

/// `A - sum m_i E_{k+i}` in the blow-up at `len(mults)` further points.
pub fn blowup(a: &Class, mults: &[i64]) -> Class {
    let k = a.k();
    let mut out = a.embed(k + mults.len()).expect("embedding into a larger k");
    match &mut out {
        Class::Rational(r) => {
            for (i, &v) in mults.iter().enumerate() {
                r.b[k + i] = BigInt::from(v);
            }
        }
        Class::Ruled(r) => {
            for (i, &v) in mults.iter().enumerate() {
                r.c[k + i] = BigInt::from(-v);
            }
        }
    }
    out
}

/// The two square `-20` classes on `CP^2 # 20` built from `a = 4`: the first
/// perturbs three points once and blows up one extra point, the second
/// perturbs two points twice.
pub fn minus_twenty_pair() -> (RationalClass, RationalClass) {
    let p1 = FamilyParams::new(4, [0, 0, 0, 0, 0, 0, 1, 1, 1]).expect("valid parameters");
    let base = singular_family(&p1).class;
    let a1 = match blowup(&Class::Rational(base), &[1]) {
        Class::Rational(r) => r,
        Class::Ruled(_) => unreachable!(),
    };
    let p2 = FamilyParams::new(4, [0, 0, 0, 0, 0, 0, 0, 2, 2]).expect("valid parameters");
    (a1, singular_family(&p2).class)
}

/// `n F` on a ruled manifold. Circle sums of `n` fibers realize this class by
/// a sphere; only the homology class is produced here.
pub fn fiber_multiple(n: i64, k: usize) -> RuledClass {
    RuledClass::from_i64(0, n, &vec![0; k])
}
