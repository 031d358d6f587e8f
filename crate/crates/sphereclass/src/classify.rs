//! Sphere-representability verdicts with replayable witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dmgroup::{
    self, is_reduced, normalize, reduce, reduce_ruled, ruled_orbit_member, ruled_shape,
    window_orbit, Move, ReductionStatus, RuledForm,
};
use crate::genus::sphere_k_bound;
use crate::lattice::{
    ser_bigint, Class, CohomologyClass, LatticeError, Manifold, RationalClass, RuledClass,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the positivity predicate needs s = 0, got s = {0}")]
    SectionCoefficient(BigInt),
    #[error("the form class must live on the same manifold as the class")]
    FormMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Representable {
    Yes,
    No,
    OutOfScope,
}

/// Equivalence type of a sphere class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeTag {
    /// `-H + 2E_1 - E_2`
    T1,
    /// `H - E_1 - .. - E_5`
    T2,
    /// `3aH - a(E_1 + .. + E_9) - 2E_10`
    T3(BigInt),
    /// `2E_1`
    T4,
    /// `2H - 2E_1 - 2E_2`
    T5,
    MinusOneE,
    MinusOneH12,
    MinusTwoE12,
    MinusTwoH123,
    MinusThreeH1234,
    MinusThreeNeg,
    RuledBF,
    None,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeTag::T1 => "T1",
            TypeTag::T2 => "T2",
            TypeTag::T3(a) => return write!(f, "T3({a})"),
            TypeTag::T4 => "T4",
            TypeTag::T5 => "T5",
            TypeTag::MinusOneE => "MinusOne_E",
            TypeTag::MinusOneH12 => "MinusOne_H12",
            TypeTag::MinusTwoE12 => "MinusTwo_E12",
            TypeTag::MinusTwoH123 => "MinusTwo_H123",
            TypeTag::MinusThreeH1234 => "MinusThree_H1234",
            TypeTag::MinusThreeNeg => "MinusThree_neg",
            TypeTag::RuledBF => "Ruled_bF",
            TypeTag::None => "None",
        };
        f.write_str(s)
    }
}

impl Serialize for TypeTag {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// The fixed representative of a rational type in `k` blow-ups, if it fits.
pub fn standard_form(tag: &TypeTag, k: usize) -> Option<RationalClass> {
    let r = |a: i64, b: &[i64], need: usize| {
        (k >= need).then(|| {
            RationalClass::from_i64(a, b)
                .embed(k)
                .expect("k >= need >= len(b)")
        })
    };
    match tag {
        TypeTag::T1 => r(-1, &[-2, 1], 2),
        TypeTag::T2 => r(1, &[1, 1, 1, 1, 1], 5),
        TypeTag::T3(a) => (k >= 10 && *a >= BigInt::from(2)).then(|| {
            let mut b = vec![a.clone(); 9];
            b.push(BigInt::from(2));
            b.resize(k, BigInt::zero());
            RationalClass::new(a * 3, b)
        }),
        TypeTag::T4 => r(0, &[-2], 1),
        TypeTag::T5 => r(2, &[2, 2], 2),
        TypeTag::MinusOneE => r(0, &[-1], 1),
        TypeTag::MinusOneH12 => r(1, &[1, 1], 2),
        TypeTag::MinusTwoE12 => r(0, &[-1, 1], 2),
        TypeTag::MinusTwoH123 => r(1, &[1, 1, 1], 3),
        TypeTag::MinusThreeH1234 => r(1, &[1, 1, 1, 1], 4),
        TypeTag::MinusThreeNeg => r(-1, &[-2], 1),
        TypeTag::RuledBF | TypeTag::None => None,
    }
}

/// Window-type tags for a given square, in reporting priority order.
pub fn window_tags(square: i64) -> &'static [TypeTag] {
    match square {
        -1 => &[TypeTag::MinusOneE, TypeTag::MinusOneH12],
        -2 => &[TypeTag::MinusTwoE12, TypeTag::MinusTwoH123],
        -3 => &[TypeTag::MinusThreeNeg, TypeTag::MinusThreeH1234],
        -4 => &[TypeTag::T1, TypeTag::T2, TypeTag::T4, TypeTag::T5],
        _ => &[],
    }
}

/// Machine-readable justification attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub code: &'static str,
    pub detail: String,
}

impl Reason {
    fn new(code: &'static str, detail: impl Into<String>) -> Self {
        Reason {
            code,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothVerdict {
    pub representable: Representable,
    #[serde(rename = "type")]
    pub type_tag: TypeTag,
    #[serde(rename = "witness")]
    pub witness_moves: Vec<Move>,
    /// Literal class reached by replaying the witness.
    pub standard_form: Option<Class>,
    /// Every tag whose representative is equivalent to the class.
    pub also_matches: Vec<TypeTag>,
    #[serde(skip)]
    pub reasons: Vec<Reason>,
}

impl SmoothVerdict {
    fn no(reasons: Vec<Reason>) -> Self {
        SmoothVerdict {
            representable: Representable::No,
            type_tag: TypeTag::None,
            witness_moves: vec![],
            standard_form: None,
            also_matches: vec![],
            reasons,
        }
    }

    fn out_of_scope(reason: Reason) -> Self {
        SmoothVerdict {
            representable: Representable::OutOfScope,
            ..Self::no(vec![reason])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymplecticVerdict {
    pub representable_for_some_form: bool,
    pub never_symplectic: bool,
    #[serde(serialize_with = "ser_bigint")]
    pub required_k_pairing: BigInt,
    pub area_condition: String,
    /// Ruled only: `f + sum_{c_i > 0} c_i > 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_positivity: Option<bool>,
    /// Ruled only: representable for some form with canonical class `K_st`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_canonical: Option<bool>,
    /// Answer for a caller-supplied form class with canonical class `K_st`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_form: Option<bool>,
    #[serde(skip)]
    pub reasons: Vec<Reason>,
}

/// Combined report for one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub version: &'static str,
    pub manifold: Manifold,
    pub class: Class,
    #[serde(serialize_with = "ser_bigint")]
    pub square: BigInt,
    pub smooth: SmoothVerdict,
    pub symplectic: SymplecticVerdict,
    pub reasons: Vec<Reason>,
}

fn small_square(sq: &BigInt) -> Option<i64> {
    let v = i64::try_from(sq).ok()?;
    (-4..=-1).contains(&v).then_some(v)
}

/// `(3a; a x 9, 2)` followed only by zeros, with `a >= 2`.
pub fn t3_parameter(a: &RationalClass) -> Option<BigInt> {
    if a.k() < 10 || a.b[10..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let t = a.b[0].clone();
    let ok = t >= BigInt::from(2)
        && a.b[..9].iter().all(|v| *v == t)
        && a.b[9] == BigInt::from(2)
        && a.a == &t * 3;
    ok.then_some(t)
}

fn reduced_no_reasons(a: &RationalClass, sq: i64) -> Vec<Reason> {
    let mut reasons = Vec::new();
    if !sphere_k_bound(a).expect("caller passes a reduced class") {
        reasons.push(Reason::new(
            "k_bound_failed",
            format!("K_st.A > -2 - A.A for the reduced form {a}"),
        ));
    }
    let detail = match sq {
        -1 => "reduced classes of square -1 are not exceptional sphere classes",
        -2 => "no reduced class of square -2 is represented by a smooth sphere",
        -3 => "no reduced class has A.A = -3 and K_st.A <= 1",
        _ => "the only reduced square -4 sphere classes are (3a; a x 9, 2) with a >= 2",
    };
    reasons.push(Reason::new("reduced_nonexistence", detail));
    reasons
}

fn characteristic_reason(a: &RationalClass, sq: i64) -> Option<Reason> {
    if !a.is_characteristic() {
        return None;
    }
    match (sq, a.k()) {
        (-4, k) if k != 5 => Some(Reason::new(
            "characteristic_needs_k5",
            "a characteristic square -4 sphere class requires k = 5",
        )),
        (-2, k) if k != 3 => Some(Reason::new(
            "characteristic_needs_k3",
            "a characteristic square -2 sphere class requires k = 3",
        )),
        _ => None,
    }
}

/// Decides whether a rational class of square -1..-4 is represented by a
/// smooth embedded sphere.
pub fn classify_smooth_sphere(a: &RationalClass) -> SmoothVerdict {
    let sq_big = a.square();
    let Some(sq) = small_square(&sq_big) else {
        return SmoothVerdict::out_of_scope(Reason::new(
            "square_out_of_scope",
            format!("square {sq_big} is outside -4..-1"),
        ));
    };
    let k = a.k();
    let red = reduce(a);
    if red.status == ReductionStatus::Reduced {
        if sq == -4 {
            if let Some(t) = t3_parameter(&red.result) {
                let tag = TypeTag::T3(t);
                return SmoothVerdict {
                    representable: Representable::Yes,
                    type_tag: tag.clone(),
                    standard_form: Some(Class::Rational(red.result.clone())),
                    witness_moves: red.moves,
                    also_matches: vec![tag],
                    reasons: vec![],
                };
            }
        }
        return SmoothVerdict::no(reduced_no_reasons(&red.result, sq));
    }

    let orbit = window_orbit(&red.result, None);
    let mut hits = Vec::new();
    for tag in window_tags(sq) {
        let Some(form) = standard_form(tag, k) else {
            continue;
        };
        let (norm, to_norm) = normalize(&form);
        if let Some(path) = orbit.path_to(&norm) {
            hits.push((tag.clone(), form, path, to_norm));
        }
    }
    if hits.is_empty() {
        let mut reasons = vec![Reason::new(
            "window_mismatch",
            format!(
                "the orbit of {} (|coeff| <= {}) contains no listed sphere class for k = {k}",
                red.result, orbit.bound
            ),
        )];
        reasons.extend(characteristic_reason(a, sq));
        return SmoothVerdict::no(reasons);
    }
    let also: Vec<TypeTag> = hits.iter().map(|h| h.0.clone()).collect();
    let (tag, form, path, to_norm) = hits.swap_remove(0);
    let mut witness = red.moves;
    witness.extend(path);
    witness.extend(to_norm.into_iter().rev());
    debug_assert_eq!(
        dmgroup::replay_rational(a, &witness).ok().as_ref(),
        Some(&form)
    );
    SmoothVerdict {
        representable: Representable::Yes,
        type_tag: tag,
        witness_moves: witness,
        standard_form: Some(Class::Rational(form)),
        also_matches: also,
        reasons: vec![],
    }
}

/// Symplectic side for a rational class: representable for some form unless
/// the smooth type is `2E_1` or `2H - 2E_1 - 2E_2` at square -4.
pub fn classify_symplectic_sphere(a: &RationalClass) -> SymplecticVerdict {
    symplectic_from_smooth(a, &classify_smooth_sphere(a))
}

fn symplectic_from_smooth(a: &RationalClass, smooth: &SmoothVerdict) -> SymplecticVerdict {
    let sq = a.square();
    let yes = smooth.representable == Representable::Yes;
    let t45 = sq == BigInt::from(-4)
        && smooth
            .also_matches
            .iter()
            .any(|t| matches!(t, TypeTag::T4 | TypeTag::T5));
    let never = yes && t45;
    let mut reasons = Vec::new();
    if never {
        reasons.push(Reason::new(
            "never_symplectic",
            "classes equivalent to 2E_1 or 2H - 2E_1 - 2E_2 are smooth spheres but never symplectic",
        ));
    }
    SymplecticVerdict {
        representable_for_some_form: yes && !never,
        never_symplectic: never,
        required_k_pairing: -sq - 2,
        area_condition: "[omega].A > 0".to_string(),
        omega_positivity: None,
        standard_canonical: None,
        fixed_form: None,
        reasons,
    }
}

/// Closed form of `sup (c f - sum e_i c_i)` over forms `cS + dF + sum e_i E_i`
/// with `c = 1 > |e_i|`, `e_i < 0`: positive iff `f + sum_{c_i > 0} c_i > 0`.
pub fn omega_positivity_ruled(a: &RuledClass) -> Result<bool, ClassifyError> {
    if !a.s.is_zero() {
        return Err(ClassifyError::SectionCoefficient(a.s.clone()));
    }
    let pos: BigInt = a.c.iter().filter(|v| v.is_positive()).sum();
    Ok((&a.f + pos).is_positive())
}

/// Smooth and symplectic verdicts for a class on an irrational ruled manifold.
///
/// `omega`, when given, is a form class assumed to have canonical class `K_st`;
/// the fixed-form answer is then `shape(A) && omega.A > 0`.
pub fn classify_ruled_sphere(
    a: &RuledClass,
    m: &Manifold,
    omega: Option<&CohomologyClass>,
) -> Result<(SmoothVerdict, SymplecticVerdict), ClassifyError> {
    let ca = Class::Ruled(a.clone());
    ca.check(m)?;
    if let Some(w) = omega {
        w.check(m).map_err(|_| ClassifyError::FormMismatch)?;
    }
    let sq = a.square();
    let mut sympl = SymplecticVerdict {
        representable_for_some_form: false,
        never_symplectic: false,
        required_k_pairing: -&sq - 2,
        area_condition: "[omega].A > 0".to_string(),
        omega_positivity: None,
        standard_canonical: None,
        fixed_form: None,
        reasons: vec![],
    };
    if !sq.is_negative() {
        let r = Reason::new(
            "square_out_of_scope",
            format!("square {sq} is not negative"),
        );
        sympl.reasons.push(r.clone());
        return Ok((SmoothVerdict::out_of_scope(r), sympl));
    }
    if !a.s.is_zero() {
        let r = Reason::new(
            "section_coefficient",
            format!("s = {} != 0: a sphere projects trivially to the base", a.s),
        );
        sympl.reasons.push(r.clone());
        return Ok((SmoothVerdict::no(vec![r]), sympl));
    }
    let positive = omega_positivity_ruled(a)?;
    sympl.omega_positivity = Some(positive);
    let shape = ruled_shape(a);
    if let Some(w) = omega {
        let area = crate::lattice::pair_mixed(w, &ca, m)?;
        sympl.fixed_form = Some(shape && area > BigRational::zero());
    }
    if !ruled_orbit_member(a) {
        let r = Reason::new(
            "not_in_sphere_orbit",
            "not equivalent to any class with s = 0, |c_i| <= 1 and f = 1 - #{c_i = 1}",
        );
        sympl.standard_canonical = Some(false);
        sympl.reasons.push(r.clone());
        let smooth = SmoothVerdict::out_of_scope(Reason::new(
            "smooth_beyond_symplectic",
            "smooth spheres outside the symplectic orbit are not classified",
        ));
        let mut smooth = smooth;
        smooth.reasons.push(r);
        return Ok((smooth, sympl));
    }
    let red = reduce_ruled(a).expect("orbit member");
    sympl.representable_for_some_form = true;
    sympl.standard_canonical = Some(shape && positive);
    if !shape {
        sympl.reasons.push(Reason::new(
            "canonical_pairing",
            "K_st.A != -2 - A.A; representable only for forms whose canonical class is moved by the witness",
        ));
    }
    let form = match red.form {
        RuledForm::Characteristic => "characteristic",
        RuledForm::Fiber { .. } => "fiber",
    };
    let smooth = SmoothVerdict {
        representable: Representable::Yes,
        type_tag: TypeTag::RuledBF,
        witness_moves: red.moves,
        standard_form: Some(Class::Ruled(red.result)),
        also_matches: vec![TypeTag::RuledBF],
        reasons: vec![Reason::new("ruled_standard_form", form)],
    };
    Ok((smooth, sympl))
}

/// Full report for a class on either manifold family.
pub fn classify(
    a: &Class,
    m: &Manifold,
    omega: Option<&CohomologyClass>,
) -> Result<Verdict, ClassifyError> {
    a.check(m)?;
    let (smooth, symplectic) = match a {
        Class::Rational(x) => {
            let s = classify_smooth_sphere(x);
            let y = symplectic_from_smooth(x, &s);
            (s, y)
        }
        Class::Ruled(x) => classify_ruled_sphere(x, m, omega)?,
    };
    let mut reasons = smooth.reasons.clone();
    for r in &symplectic.reasons {
        if !reasons.contains(r) {
            reasons.push(r.clone());
        }
    }
    Ok(Verdict {
        version: crate::VERSION,
        manifold: *m,
        class: a.clone(),
        square: a.dot(a),
        smooth,
        symplectic,
        reasons,
    })
}

/// True when the reduced class is a square -4 sphere class.
pub fn reduced_is_sphere(a: &RationalClass) -> bool {
    is_reduced(a) && a.square() == BigInt::from(-4) && t3_parameter(a).is_some()
}
