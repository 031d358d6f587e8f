//! Exhaustive integer searches and rational sanity checks for the systems
//!
//! ```text
//! 3a = sum b_i - d,   a^2 = sum b_i^2 + s,   a >= b_1 + b_2 + b_3,
//! b_1 >= b_2 >= .. >= b_k >= tau
//! ```
//!
//! where `s` is the target square of `aH - sum b_i E_i` and `d = K_st.A`.
//! Search kernels work in `i64`; every entry point caps its coefficient bound
//! at [`MAX_BOUND`] so no intermediate can overflow.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::JsonNumber;

/// Largest coefficient bound accepted by the searches.
pub const MAX_BOUND: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophantineError {
    #[error("window enumeration needs a negative square, got {0}")]
    NonNegativeSquare(i64),
    #[error("coefficient bound {0} outside 0..={MAX_BOUND}")]
    Bound(i64),
    #[error("tau must be non-negative, got {0}")]
    Tau(i64),
    #[error("no normal-form hypothesis covers square {square}, k = {k}, tau = {tau}, d = {d}")]
    Hypothesis {
        square: i64,
        k: usize,
        tau: i64,
        d: i64,
    },
    #[error("rearrangement precondition failed: {0}")]
    Rearrange(String),
    #[error("grid resolution must be positive")]
    Resolution,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    if a <= 0 {
        -((-a) / b)
    } else {
        (a + b - 1) / b
    }
}

fn ceil_sqrt(v: i64) -> i64 {
    if v <= 0 {
        return 0;
    }
    let r = v.sqrt();
    if r * r == v {
        r
    } else {
        r + 1
    }
}

/// Finite search region embedded in every bounded report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    pub a: [i64; 2],
    pub b: [i64; 2],
    pub k: usize,
    pub d: [Option<i64>; 2],
}

/// Result of [`enumerate_window_solutions`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub version: &'static str,
    pub system: WindowSystem,
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    /// `(a, b_1, b_2, ..)` with trailing zeros removed, sorted.
    pub solutions: Vec<Vec<i64>>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowSystem {
    pub square: i64,
    pub k_max: usize,
}

/// Enumerates `(a; b)` with `a >= 0`, `b` descending and non-negative,
/// `a^2 - sum b_i^2 = square`, and
/// `b_1^2+b_2^2+b_3^2 + square <= a^2 <= 3/4 (b_1^2+b_2^2+b_3^2)`.
///
/// With `T = b_1^2+b_2^2+b_3^2` the two window inequalities give
/// `T/4 <= -square`, so `b_1^2 <= T <= -4 square`, `a^2 <= -3 square` and
/// `sum b_i^2 = a^2 - square <= -4 square`. The enumeration over this box is
/// therefore complete and at most `-4 square` entries are nonzero.
pub fn enumerate_window_solutions(
    square: i64,
    k_max: usize,
) -> Result<WindowReport, DiophantineError> {
    if square >= 0 {
        return Err(DiophantineError::NonNegativeSquare(square));
    }
    if square < -MAX_BOUND {
        return Err(DiophantineError::Bound(square));
    }
    let b_max = (-4 * square).sqrt();
    let a_max = (-3 * square).sqrt();
    let mut out = Vec::new();
    for a in 0..=a_max {
        let total = a * a - square;
        let mut b = Vec::new();
        window_rec(a, square, total, b_max, k_max, &mut b, &mut out);
    }
    out.sort();
    Ok(WindowReport {
        version: crate::VERSION,
        system: WindowSystem { square, k_max },
        search_box: SearchBox {
            a: [0, a_max],
            b: [0, b_max],
            k: k_max,
            d: [None, None],
        },
        solutions: out,
        complete: true,
        elapsed_ms: None,
    })
}

fn window_rec(
    a: i64,
    square: i64,
    rem: i64,
    cap: i64,
    k_max: usize,
    b: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if rem == 0 {
        let t: i64 = b.iter().take(3).map(|v| v * v).sum();
        if t + square <= a * a && 4 * a * a <= 3 * t {
            let mut row = vec![a];
            row.extend_from_slice(b);
            out.push(row);
        }
        return;
    }
    if b.len() == k_max {
        return;
    }
    let hi = cap.min(rem.sqrt());
    for v in (1..=hi).rev() {
        b.push(v);
        window_rec(a, square, rem - v * v, v, k_max, b, out);
        b.pop();
    }
}

/// Integer system searched by [`verify_reduced_nonexistence`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintSystem {
    pub square_target: i64,
    pub d_max: i64,
    /// Optional lower bound on `d`.
    pub d_min: Option<i64>,
    pub tau: i64,
    pub k: usize,
    pub coeff_bound: i64,
    /// Restrict to `b_k` equal to this value.
    pub last_b: Option<i64>,
}

impl ConstraintSystem {
    pub fn new(square_target: i64, k: usize, d_max: i64, tau: i64, coeff_bound: i64) -> Self {
        ConstraintSystem {
            square_target,
            d_max,
            d_min: None,
            tau,
            k,
            coeff_bound,
            last_b: None,
        }
    }

    pub fn with_last_b(mut self, v: i64) -> Self {
        self.last_b = Some(v);
        self
    }

    pub fn with_d_min(mut self, v: i64) -> Self {
        self.d_min = Some(v);
        self
    }
}

/// Report of a bounded search for reduced solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonexistenceReport {
    pub version: &'static str,
    pub system: ConstraintSystem,
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    pub solutions: Vec<Vec<i64>>,
    /// Always false: a box search cannot settle an unbounded statement.
    pub complete: bool,
    pub scope: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

struct Dfs<'a> {
    sys: &'a ConstraintSystem,
    a: i64,
    tau: i64,
    sum_max: i64,
    sum_min: Option<i64>,
    b: Vec<i64>,
    out: Vec<Vec<i64>>,
}

impl Dfs<'_> {
    fn run(&mut self, pos: usize, cap: i64, rem: i64, sum: i64) {
        let k = self.sys.k;
        let m = (k - pos) as i64;
        if m == 0 {
            let ok_min = self.sum_min.is_none_or(|s| sum >= s);
            if rem == 0 && sum <= self.sum_max && ok_min {
                let mut row = vec![self.a];
                row.extend_from_slice(&self.b);
                self.out.push(row);
            }
            return;
        }
        let tau = self.tau;
        if rem < m * tau * tau || cap < tau || rem > m * cap * cap {
            return;
        }
        let lower_sum = if cap == 0 { 0 } else { ceil_div(rem, cap) }.max(m * tau);
        if sum + lower_sum > self.sum_max {
            return;
        }
        if let Some(s) = self.sum_min {
            if sum + (m * rem).sqrt() < s {
                return;
            }
        }
        let mut hi = cap.min((rem - (m - 1) * tau * tau).sqrt());
        let a = self.a;
        match pos {
            0 => hi = hi.min(a),
            1 => {
                let rest = if k >= 3 { tau } else { 0 };
                hi = hi.min(a - self.b[0] - rest);
            }
            2 => hi = hi.min(a - self.b[0] - self.b[1]),
            _ => {}
        }
        let mut lo = tau.max(ceil_sqrt(ceil_div(rem, m)));
        if m == 1 {
            if let Some(v) = self.sys.last_b {
                lo = lo.max(v);
                hi = hi.min(v);
            }
        }
        let mut v = hi;
        while v >= lo {
            self.b.push(v);
            self.run(pos + 1, v, rem - v * v, sum + v);
            self.b.pop();
            v -= 1;
        }
    }
}

fn search_a(sys: &ConstraintSystem, a: i64) -> Vec<Vec<i64>> {
    let tau = sys.tau.max(sys.last_b.unwrap_or(sys.tau));
    let rem = a * a - sys.square_target;
    if rem < 0 {
        return vec![];
    }
    let mut dfs = Dfs {
        sys,
        a,
        tau,
        sum_max: 3 * a + sys.d_max,
        sum_min: sys.d_min.map(|d| 3 * a + d),
        b: Vec::with_capacity(sys.k),
        out: Vec::new(),
    };
    if sys.k == 0 {
        dfs.run(0, 0, rem, 0);
    } else {
        dfs.run(0, sys.coeff_bound, rem, 0);
    }
    dfs.out
}

/// Exhaustive search for reduced integer solutions inside
/// `0 <= a <= coeff_bound`, `tau <= b_i <= coeff_bound`.
///
/// Pruning uses the remaining sum of squares `R` over `m` open slots capped by
/// the previous entry `c`: the slots need `m tau^2 <= R <= m c^2`, their sum is
/// at least `R / c` and at most `sqrt(m R)`.
pub fn verify_reduced_nonexistence(
    sys: &ConstraintSystem,
) -> Result<NonexistenceReport, DiophantineError> {
    if !(0..=MAX_BOUND).contains(&sys.coeff_bound) {
        return Err(DiophantineError::Bound(sys.coeff_bound));
    }
    if sys.tau < 0 {
        return Err(DiophantineError::Tau(sys.tau));
    }
    if sys.d_max.abs() > MAX_BOUND || sys.square_target.abs() > MAX_BOUND {
        return Err(DiophantineError::Bound(sys.d_max.max(sys.square_target)));
    }
    let mut solutions: Vec<Vec<i64>> = (0..=sys.coeff_bound)
        .into_par_iter()
        .flat_map_iter(|a| search_a(sys, a))
        .collect();
    solutions.sort();
    solutions.dedup();
    let tau = sys.tau.max(sys.last_b.unwrap_or(sys.tau));
    Ok(NonexistenceReport {
        version: crate::VERSION,
        system: sys.clone(),
        search_box: SearchBox {
            a: [0, sys.coeff_bound],
            b: [tau, sys.coeff_bound],
            k: sys.k,
            d: [sys.d_min, Some(sys.d_max)],
        },
        solutions,
        complete: false,
        scope: "bounded verification inside the stated box only",
        elapsed_ms: None,
    })
}

/// `(3t; t x 9, 2)` for `2 <= t <= bound / 3`: the only tuples with nine
/// entries whose sum is `3a` and whose squares sum to `a^2`, by equality in
/// Cauchy-Schwarz.
pub fn equal_entry_family(bound: i64) -> Vec<Vec<i64>> {
    (2..=bound / 3)
        .map(|t| {
            let mut row = vec![3 * t];
            row.extend(std::iter::repeat_n(t, 9));
            row.push(2);
            row
        })
        .collect()
}

/// True if the first nine `b` entries are equal with `a` three times that value.
pub fn is_equal_entry_solution(row: &[i64]) -> bool {
    row.len() == 11 && row[1..10].iter().all(|&v| v == row[1]) && row[0] == 3 * row[1]
}

/// Rational point used by the rearrangement step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RearrangementState {
    pub a: BigRational,
    pub b: Vec<BigRational>,
    pub tau: BigInt,
}

impl Serialize for RearrangementState {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        serde_json::json!({
            "a": self.a.to_json(),
            "b": self.b.iter().map(JsonNumber::to_json).collect::<Vec<_>>(),
            "tau": self.tau.to_json(),
        })
        .serialize(ser)
    }
}

/// Which constraints a rearrangement state satisfies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateCheck {
    /// `d = sum b - 3a`.
    pub d: String,
    pub d_at_most_2: bool,
    pub a_dominates_top3: bool,
    pub ordered_above_tau: bool,
    /// `a^2 <= sum b^2 + square`.
    pub relaxed_square: bool,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl RearrangementState {
    pub fn from_i64(a: i64, b: &[i64], tau: i64) -> Self {
        RearrangementState {
            a: rat(a),
            b: b.iter().map(|&v| rat(v)).collect(),
            tau: BigInt::from(tau),
        }
    }

    pub fn sum_b(&self) -> BigRational {
        self.b.iter().cloned().sum()
    }

    pub fn sum_b_sq(&self) -> BigRational {
        self.b.iter().map(|v| v * v).sum()
    }

    fn top3(&self) -> BigRational {
        self.b.iter().take(3).cloned().sum()
    }

    pub fn a_dominates_top3(&self) -> bool {
        self.a >= self.top3()
    }

    pub fn ordered_above_tau(&self) -> bool {
        let tau = BigRational::from_integer(self.tau.clone());
        self.b.windows(2).all(|w| w[0] >= w[1]) && self.b.iter().all(|v| *v >= tau)
    }

    pub fn check(&self, square: i64) -> StateCheck {
        let d = self.sum_b() - &self.a * rat(3);
        StateCheck {
            d: d.to_string(),
            d_at_most_2: d <= rat(2),
            a_dominates_top3: self.a_dominates_top3(),
            ordered_above_tau: self.ordered_above_tau(),
            relaxed_square: &self.a * &self.a <= self.sum_b_sq() + rat(square),
        }
    }
}

/// Replaces `(b_i, b_j)` by `(b_i + c, b_j - c)` (0-based indices).
///
/// Requires `b_i > b_j > 0`, `c > 0`, and that the result still satisfies
/// `a >= b_1 + b_2 + b_3` and `b_1 >= .. >= b_k >= tau`.
///
/// # Panics
/// If the sum of the `b_i` changes or the sum of squares grows by less than `2c^2`.
pub fn rearrange(
    state: &RearrangementState,
    i: usize,
    j: usize,
    c: &BigRational,
) -> Result<RearrangementState, DiophantineError> {
    let err = |m: &str| Err(DiophantineError::Rearrange(m.to_string()));
    let k = state.b.len();
    if i >= k || j >= k || i == j {
        return err("indices must be distinct and in range");
    }
    if !c.is_positive() {
        return err("c must be positive");
    }
    if !(state.b[i] > state.b[j] && state.b[j].is_positive()) {
        return err("need b_i > b_j > 0");
    }
    let mut next = state.clone();
    next.b[i] = &next.b[i] + c;
    next.b[j] = &next.b[j] - c;
    if !next.a_dominates_top3() {
        return err("a >= b_1 + b_2 + b_3 fails after the move");
    }
    if !next.ordered_above_tau() {
        return err("b_1 >= .. >= b_k >= tau fails after the move");
    }
    assert_eq!(next.sum_b(), state.sum_b(), "sum of b changed");
    let grow = next.sum_b_sq() - state.sum_b_sq();
    assert!(
        grow >= c * c * rat(2),
        "sum of squares grew by {grow} < 2c^2"
    );
    Ok(next)
}

/// Hypothesis under which the normal form is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormalFormCase {
    TauOneLargeK,
    TauTwoOrThreeK10,
    TauOneSmallDK10,
    /// `tau = 1`, `d = 2`, `k = 10`: the normal form is not expected to exist
    /// and no outcome is asserted.
    IntentionallyUnverified,
    SquareMinusThree,
}

/// Per-`r` outcome of the grid search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormSlice {
    pub r: usize,
    pub grid_points: usize,
    pub feasible: bool,
    /// A grid point `(B, b')` where `F = 0`, or one end of a sign change.
    pub witness: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    pub version: &'static str,
    pub square: i64,
    pub k: usize,
    pub tau: i64,
    pub d: i64,
    pub case: NormalFormCase,
    pub b_max: i64,
    pub resolution: i64,
    pub slices: Vec<NormalFormSlice>,
    /// `b_1'' = (k-7) tau / 2 - d / 2`.
    pub comparison_b1: String,
    pub comparison_b1_at_least_tau: bool,
    pub comparison_f_nonnegative: bool,
    /// `Some(true)` when no slice should be feasible, `None` when no outcome is asserted.
    pub expected_infeasible: Option<bool>,
    /// Whether the grid outcome agrees with the expectation (absent when none).
    pub consistent: Option<bool>,
}

fn classify_hypothesis(square: i64, k: usize, tau: i64, d: i64) -> Option<NormalFormCase> {
    match square {
        -4 if tau == 1 && k >= 11 && d <= 2 => Some(NormalFormCase::TauOneLargeK),
        -4 if (tau == 2 || tau == 3) && k == 10 && d <= 2 => Some(NormalFormCase::TauTwoOrThreeK10),
        -4 if tau == 1 && k == 10 && d < 2 => Some(NormalFormCase::TauOneSmallDK10),
        -4 if tau == 1 && k == 10 && d == 2 => Some(NormalFormCase::IntentionallyUnverified),
        -3 if tau == 1 && k >= 10 && d <= 1 => Some(NormalFormCase::SquareMinusThree),
        _ => None,
    }
}

/// Searches the normal form
/// `a = b_1 + 2B`, `b_2 = .. = b_{r+3} = B`, `b_{r+4} = b'`, remaining entries `tau`,
/// with `b_1 >= B >= b' >= tau`, for real solutions of
/// `F = a^2 - sum b_i^2 - square = 0` subject to `3a = sum b_i - d`.
///
/// For each `0 <= r <= k-4`, `b_1` is eliminated through
/// `2 b_1 = (r-4) B + b' + (k-4-r) tau - d`, and `F` is evaluated exactly on
/// the grid `tau <= b' <= B <= b_max` with step `1/resolution`. A slice is
/// feasible if `F` vanishes at a grid point or changes sign between two
/// adjacent admissible points (the admissible region is convex, so a sign
/// change forces a real root on the segment). This is a numeric sanity
/// check, not a proof.
pub fn verify_normal_form(
    square: i64,
    k: usize,
    tau: i64,
    d: i64,
    b_max: i64,
    resolution: i64,
) -> Result<NormalFormReport, DiophantineError> {
    if resolution <= 0 {
        return Err(DiophantineError::Resolution);
    }
    if !(0..=MAX_BOUND).contains(&b_max) {
        return Err(DiophantineError::Bound(b_max));
    }
    let case = classify_hypothesis(square, k, tau, d).ok_or(DiophantineError::Hypothesis {
        square,
        k,
        tau,
        d,
    })?;
    let slices: Vec<NormalFormSlice> = (0..=k - 4)
        .into_par_iter()
        .map(|r| normal_form_slice(square, k, tau, d, r, b_max, resolution))
        .collect();

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let t = rat(tau);
    let b1 = rat(k as i64 - 7) * &t * &half - rat(d) * &half;
    let a2 = &b1 + &t * rat(2);
    let f = &a2 * &a2 - &b1 * &b1 - rat(k as i64 - 1) * &t * &t - rat(square);

    let expected = match case {
        NormalFormCase::TauOneLargeK | NormalFormCase::TauOneSmallDK10 => Some(true),
        NormalFormCase::TauTwoOrThreeK10 if tau == 3 => Some(true),
        NormalFormCase::SquareMinusThree => Some(true),
        _ => None,
    };
    let any = slices.iter().any(|s| s.feasible);
    Ok(NormalFormReport {
        version: crate::VERSION,
        square,
        k,
        tau,
        d,
        case,
        b_max,
        resolution,
        slices,
        comparison_b1: b1.to_string(),
        comparison_b1_at_least_tau: b1 >= t,
        comparison_f_nonnegative: !f.is_negative(),
        expected_infeasible: expected,
        consistent: expected.map(|e| e == !any),
    })
}

/// Evaluates the normal form on one `(B, b')` point; `None` if inadmissible.
fn normal_form_value(
    square: i64,
    k: usize,
    tau: &BigRational,
    d: &BigRational,
    r: usize,
    big_b: &BigRational,
    bp: &BigRational,
) -> Option<BigRational> {
    let r_q = rat(r as i64);
    let tail = rat(k as i64 - 4 - r as i64);
    let two = rat(2);
    let b1 = ((&r_q - rat(4)) * big_b + bp + &tail * tau - d) / &two;
    if b1 < *big_b || bp > big_b || bp < tau {
        return None;
    }
    let a = &b1 + big_b * &two;
    let sum_sq = &b1 * &b1 + (&r_q + &two) * big_b * big_b + bp * bp + tail * tau * tau;
    Some(&a * &a - sum_sq - rat(square))
}

fn normal_form_slice(
    square: i64,
    k: usize,
    tau: i64,
    d: i64,
    r: usize,
    b_max: i64,
    resolution: i64,
) -> NormalFormSlice {
    let step = BigRational::new(BigInt::one(), BigInt::from(resolution));
    let t = rat(tau);
    let dq = rat(d);
    let n = ((b_max - tau) * resolution).max(0) as usize;
    let coord = |i: usize| &t + &step * rat(i as i64);
    let mut grid: Vec<Vec<Option<BigRational>>> = Vec::with_capacity(n + 1);
    let mut points = 0usize;
    for i in 0..=n {
        let big_b = coord(i);
        let row: Vec<Option<BigRational>> = (0..=i)
            .map(|j| normal_form_value(square, k, &t, &dq, r, &big_b, &coord(j)))
            .collect();
        points += row.iter().filter(|v| v.is_some()).count();
        grid.push(row);
    }
    let label = |i: usize, j: usize| Some([coord(i).to_string(), coord(j).to_string()]);
    let sign = |v: &BigRational| {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    for i in 0..=n {
        for j in 0..=i {
            let Some(v) = &grid[i][j] else { continue };
            let s = sign(v);
            if s == 0 {
                return NormalFormSlice {
                    r,
                    grid_points: points,
                    feasible: true,
                    witness: label(i, j),
                };
            }
            let right = (j < i).then(|| grid[i][j + 1].as_ref()).flatten();
            let up = (i < n).then(|| grid[i + 1][j].as_ref()).flatten();
            for w in [right, up].into_iter().flatten() {
                if sign(w) == -s {
                    return NormalFormSlice {
                        r,
                        grid_points: points,
                        feasible: true,
                        witness: label(i, j),
                    };
                }
            }
        }
    }
    NormalFormSlice {
        r,
        grid_points: points,
        feasible: false,
        witness: None,
    }
}

/// Result of [`verify_ci_bound`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CiBoundReport {
    pub version: &'static str,
    pub h: u32,
    pub k_max: usize,
    pub f_bound: i64,
    pub c_bound: i64,
    pub examined: u64,
    /// Survivors as `(f, c_1, .., c_k)`, sorted by `k` then lexicographically.
    pub survivors: Vec<Vec<i64>>,
    /// Survivors with some `|c_i| > 1`.
    pub violations: Vec<Vec<i64>>,
    /// Survivors not of the form `f = 1 - #{c_i = 1}` with `c_i` in `{-1, 0, 1}`.
    pub off_shape: Vec<Vec<i64>>,
    pub complete: bool,
    pub scope: &'static str,
}

/// Survives the three numerical conditions on `fF + sum c_i E_i`:
/// negative square, `2f + sum c_i (c_i + 1) <= 2`, and `f + sum_{c_i > 0} c_i > 0`.
pub fn ci_survivor(f: i64, c: &[i64]) -> bool {
    let l: i64 = c.iter().map(|v| v * v).sum();
    let genus = 2 * f + c.iter().map(|v| v * (v + 1)).sum::<i64>();
    let pos: i64 = c.iter().filter(|&&v| v > 0).sum();
    l > 0 && genus <= 2 && f + pos > 0
}

fn shape_ok(f: i64, c: &[i64]) -> bool {
    let p = c.iter().filter(|&&v| v == 1).count() as i64;
    c.iter().all(|v| v.abs() <= 1) && f == 1 - p
}

/// Enumerates `s = 0`, `|f| <= f_bound`, `|c_i| <= c_bound` for every
/// `1 <= k <= k_max` and reports survivors of [`ci_survivor`].
pub fn verify_ci_bound(
    h: u32,
    k_max: usize,
    f_bound: i64,
    c_bound: i64,
) -> Result<CiBoundReport, DiophantineError> {
    if f_bound < 0 || c_bound < 0 || f_bound > MAX_BOUND || c_bound > 1000 {
        return Err(DiophantineError::Bound(f_bound.max(c_bound)));
    }
    let width = (2 * c_bound + 1) as u64;
    let mut survivors = Vec::new();
    let mut examined = 0u64;
    for k in 1..=k_max {
        let total = width.pow(k as u32);
        examined += total * (2 * f_bound + 1) as u64;
        let mut found: Vec<Vec<i64>> = (0..total)
            .into_par_iter()
            .flat_map_iter(|code| {
                let mut c = Vec::with_capacity(k);
                let mut x = code;
                for _ in 0..k {
                    c.push((x % width) as i64 - c_bound);
                    x /= width;
                }
                (-f_bound..=f_bound)
                    .filter(|&f| ci_survivor(f, &c))
                    .map(|f| {
                        let mut row = vec![f];
                        row.extend_from_slice(&c);
                        row
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        found.sort();
        survivors.extend(found);
    }
    let violations = survivors
        .iter()
        .filter(|row| row[1..].iter().any(|v| v.abs() > 1))
        .cloned()
        .collect();
    let off_shape = survivors
        .iter()
        .filter(|row| !shape_ok(row[0], &row[1..]))
        .cloned()
        .collect();
    Ok(CiBoundReport {
        version: crate::VERSION,
        h,
        k_max,
        f_bound,
        c_bound,
        examined,
        survivors,
        violations,
        off_shape,
        complete: false,
        scope: "bounded verification inside the stated box only",
    })
}

/// Formats a tuple as `(a,b_1,b_2,..)`.
pub fn tuple_text(row: &[i64]) -> String {
    let parts: Vec<String> = row.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Wall-clock helper for callers that want to attach timings.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_millis())
}
