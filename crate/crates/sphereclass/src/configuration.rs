//! Homological curve configurations, positivity predicates, and ADE recognition.
//!
//! Only the homological data is checked. Whether the vertices can be realized
//! by curves holomorphic for one common almost complex structure is not
//! decided here.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dmgroup::reduce;
use crate::lattice::{
    pair_mixed, Class, CohomologyClass, LatticeError, Manifold, RationalClass, RuledClass,
};
use crate::literal::{parse_class, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration document: {0}")]
    Json(String),
    #[error("vertex {index}: {source}")]
    Vertex { index: usize, source: ParseError },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Unordered edge between vertices `i` and `j` (0-based), with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub labels: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub vertices: Vec<Class>,
    pub edges: Vec<Edge>,
}

#[derive(Deserialize)]
struct ConfigDoc {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<Edge>,
}

impl Configuration {
    pub fn new(vertices: Vec<Class>, edges: Vec<Edge>) -> Self {
        Configuration { vertices, edges }
    }

    /// Reads `{"vertices": [literal, ..], "edges": [{"i", "j", "labels"}, ..]}`.
    pub fn from_json(text: &str, m: &Manifold) -> Result<Self, ConfigError> {
        let doc: ConfigDoc =
            serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        let vertices = doc
            .vertices
            .iter()
            .enumerate()
            .map(|(index, s)| {
                parse_class(s, m).map_err(|source| ConfigError::Vertex { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Configuration {
            vertices,
            edges: doc.edges,
        })
    }

    /// All edge labels equal to 1.
    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.labels.iter().all(|&l| l == 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigReport {
    pub valid: bool,
    pub simple: bool,
    pub vertex_count: usize,
    pub diagnostics: Vec<Diagnostic>,
    pub scope: &'static str,
}

fn diag(code: &'static str, detail: String) -> Diagnostic {
    Diagnostic { code, detail }
}

/// Checks vertices against `m`, edge indices and labels, and that for every
/// pair `i < j` the pairing is non-negative and equals the label sum.
pub fn validate_configuration(g: &Configuration, m: &Manifold) -> ConfigReport {
    let n = g.vertices.len();
    let mut ds = Vec::new();
    let mut ok_vertex = vec![true; n];
    for (i, v) in g.vertices.iter().enumerate() {
        if let Err(e) = v.check(m) {
            ok_vertex[i] = false;
            ds.push(diag("vertex_manifold", format!("vertex {i}: {e}")));
        }
    }
    let mut sums: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (t, e) in g.edges.iter().enumerate() {
        if e.i >= n || e.j >= n {
            ds.push(diag(
                "edge_index",
                format!("edge {t}: ({}, {}) with {n} vertices", e.i, e.j),
            ));
            continue;
        }
        if e.i == e.j {
            ds.push(diag(
                "self_edge",
                format!("edge {t}: vertex {} joined to itself", e.i),
            ));
            continue;
        }
        if e.labels.is_empty() {
            ds.push(diag("empty_labels", format!("edge {t}: no multiplicities")));
        }
        for &l in &e.labels {
            if l <= 0 {
                ds.push(diag("nonpositive_label", format!("edge {t}: label {l}")));
            }
        }
        let key = (e.i.min(e.j), e.i.max(e.j));
        if sums.contains_key(&key) {
            ds.push(diag(
                "duplicate_edge",
                format!("edge {t}: pair {key:?} listed twice"),
            ));
        }
        *sums.entry(key).or_default() += e.labels.iter().sum::<i64>();
    }
    for i in 0..n {
        for j in i + 1..n {
            if !(ok_vertex[i] && ok_vertex[j]) {
                continue;
            }
            let a = g.vertices[i].dot(&g.vertices[j]);
            let s = BigInt::from(sums.get(&(i, j)).copied().unwrap_or(0));
            if a.is_negative() {
                ds.push(diag(
                    "negative_intersection",
                    format!("A_{i}.A_{j} = {a} < 0"),
                ));
            } else if a != s {
                ds.push(diag(
                    "label_sum_mismatch",
                    format!("A_{i}.A_{j} = {a} but edge labels sum to {s}"),
                ));
            }
        }
    }
    ConfigReport {
        valid: ds.is_empty(),
        simple: g.is_simple(),
        vertex_count: n,
        diagnostics: ds,
        scope: "homological data only; realizability by curves is not checked",
    }
}

/// `omega.A_i > 0` for every vertex.
pub fn is_g_positive(
    omega: &CohomologyClass,
    g: &Configuration,
    m: &Manifold,
) -> Result<bool, LatticeError> {
    for v in &g.vertices {
        if !pair_mixed(omega, v, m)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalList {
    pub classes: Vec<Class>,
    pub bound: i64,
    /// True only when the box provably contains every solution.
    pub complete: bool,
}

/// Largest coefficient of a `K_st`-exceptional class on `CP^2 # k`, `k <= 8`.
fn exceptional_coeff_max(k: usize) -> Option<i64> {
    match k {
        0..=4 => Some(1),
        5 | 6 => Some(2),
        7 => Some(3),
        8 => Some(6),
        _ => None,
    }
}

fn sq_split(rem: i64, slots: usize, cap: i64, v: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if slots == 0 {
        if rem == 0 {
            out.push(v.clone());
        }
        return;
    }
    if rem > slots as i64 * cap * cap {
        return;
    }
    let hi = cap.min(rem.sqrt_floor());
    for x in -hi..=hi {
        v.push(x);
        sq_split(rem - x * x, slots - 1, cap, v, out);
        v.pop();
    }
}

trait SqrtFloor {
    fn sqrt_floor(self) -> i64;
}

impl SqrtFloor for i64 {
    fn sqrt_floor(self) -> i64 {
        if self <= 0 {
            0
        } else {
            num_integer::Roots::sqrt(&self)
        }
    }
}

/// All classes `E` with `E.E = -1`, `K.E = -1` and every coefficient in
/// `[-bound, bound]`, sorted by coefficient vector.
pub fn enumerate_exceptional(
    kcls: &Class,
    m: &Manifold,
    bound: i64,
) -> Result<ExceptionalList, LatticeError> {
    kcls.check(m)?;
    let k = m.k();
    let bound = bound.max(0);
    let kst = Class::canonical_std(m);
    let classes: Vec<Class> = match m {
        Manifold::Rational { .. } => (-bound..=bound)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut sols = Vec::new();
                sq_split(a * a + 1, k, bound, &mut Vec::with_capacity(k), &mut sols);
                sols.into_iter()
                    .map(move |b| Class::Rational(RationalClass::from_i64(a, &b)))
                    .collect::<Vec<_>>()
            })
            .filter(|e| kcls.dot(e) == BigInt::from(-1))
            .collect(),
        Manifold::Ruled { .. } => {
            let pairs: Vec<(i64, i64)> = (-bound..=bound)
                .flat_map(|s| (-bound..=bound).map(move |f| (s, f)))
                .collect();
            pairs
                .into_par_iter()
                .flat_map_iter(|(s, f)| {
                    let rem = 2 * s * f + 1;
                    let mut sols = Vec::new();
                    if rem >= 0 {
                        sq_split(rem, k, bound, &mut Vec::with_capacity(k), &mut sols);
                    }
                    sols.into_iter()
                        .map(move |c| Class::Ruled(RuledClass::from_i64(s, f, &c)))
                        .collect::<Vec<_>>()
                })
                .filter(|e| kcls.dot(e) == BigInt::from(-1))
                .collect()
        }
    };
    let complete = matches!(m, Manifold::Rational { .. })
        && *kcls == kst
        && exceptional_coeff_max(k).is_some_and(|c| bound >= c);
    Ok(ExceptionalList {
        classes,
        bound,
        complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub value: String,
}

fn cond(name: impl Into<String>, passed: bool, value: impl ToString) -> Condition {
    Condition {
        name: name.into(),
        passed,
        value: value.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InflationReport {
    pub conditions: Vec<Condition>,
    pub exceptional_checked: usize,
    pub exceptional_complete: bool,
    pub all_pass: bool,
    pub scope: &'static str,
}

/// Exceptional classes of positive `omega`-area inside the box.
fn omega_exceptional(
    kcls: &Class,
    omega: &CohomologyClass,
    m: &Manifold,
    bound: i64,
) -> Result<(Vec<Class>, bool), LatticeError> {
    let list = enumerate_exceptional(kcls, m, bound)?;
    let mut out = Vec::new();
    for e in list.classes {
        if pair_mixed(omega, &e, m)?.is_positive() {
            out.push(e);
        }
    }
    Ok((out, list.complete))
}

/// Evaluates the inequalities needed to inflate along `a` relative to `v`:
/// `A.A > 0`, `A.omega > 0`, `(A-K).omega > 0`, `(A-K)^2 > 0`,
/// `(A-K).V_i > 0`, and `A.E > 0` for exceptional `E` of positive area.
pub fn inflation_class_check(
    a: &Class,
    v: &Configuration,
    kcls: &Class,
    omega: &CohomologyClass,
    m: &Manifold,
    bound: i64,
) -> Result<InflationReport, LatticeError> {
    a.check(m)?;
    kcls.check(m)?;
    omega.check(m)?;
    let amk = a.add(&kcls.scaled(&BigInt::from(-1)));
    let mut cs = Vec::new();
    let sq = a.dot(a);
    cs.push(cond("A.A > 0", sq.is_positive(), &sq));
    let aw = pair_mixed(omega, a, m)?;
    cs.push(cond("A.omega > 0", aw.is_positive(), &aw));
    let kw = pair_mixed(omega, &amk, m)?;
    cs.push(cond("(A-K).omega > 0", kw.is_positive(), &kw));
    let s2 = amk.dot(&amk);
    cs.push(cond("(A-K)^2 > 0", s2.is_positive(), &s2));
    for (i, vi) in v.vertices.iter().enumerate() {
        vi.check(m)?;
        let x = amk.dot(vi);
        cs.push(cond(format!("(A-K).V_{i} > 0"), x.is_positive(), &x));
    }
    let (es, complete) = omega_exceptional(kcls, omega, m, bound)?;
    let bad: Vec<String> = es
        .iter()
        .filter(|e| !a.dot(e).is_positive())
        .map(crate::literal::format_class)
        .collect();
    cs.push(cond(
        format!("A.E > 0 for exceptional E, |coeff| <= {bound}"),
        bad.is_empty(),
        if bad.is_empty() {
            "ok".to_string()
        } else {
            bad.join("; ")
        },
    ));
    Ok(InflationReport {
        all_pass: cs.iter().all(|c| c.passed),
        conditions: cs,
        exceptional_checked: es.len(),
        exceptional_complete: complete,
        scope: "exceptional classes enumerated inside a bounded box only",
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeReport {
    pub conditions: Vec<Condition>,
    pub in_cone: bool,
    pub exceptional_complete: bool,
    pub scope: &'static str,
}

/// `alpha.V_i > 0` for all `i`, `alpha^2 > 0`, and `alpha.E > 0` for every
/// `K`-exceptional class in the box.
pub fn in_relative_cone(
    alpha: &CohomologyClass,
    v: &Configuration,
    kcls: &Class,
    m: &Manifold,
    bound: i64,
) -> Result<ConeReport, LatticeError> {
    alpha.check(m)?;
    let mut cs = Vec::new();
    for (i, vi) in v.vertices.iter().enumerate() {
        let x = pair_mixed(alpha, vi, m)?;
        cs.push(cond(format!("alpha.V_{i} > 0"), x.is_positive(), &x));
    }
    let sq: BigRational = alpha.dot(alpha);
    cs.push(cond("alpha^2 > 0", sq.is_positive(), &sq));
    let list = enumerate_exceptional(kcls, m, bound)?;
    let mut bad = Vec::new();
    for e in &list.classes {
        if !pair_mixed(alpha, e, m)?.is_positive() {
            bad.push(crate::literal::format_class(e));
        }
    }
    cs.push(cond(
        format!("alpha.E > 0 for exceptional E, |coeff| <= {bound}"),
        bad.is_empty(),
        if bad.is_empty() {
            "ok".to_string()
        } else {
            bad.join("; ")
        },
    ));
    Ok(ConeReport {
        in_cone: cs.iter().all(|c| c.passed),
        conditions: cs,
        exceptional_complete: list.complete,
        scope: "exceptional classes enumerated inside a bounded box only",
    })
}

/// Dynkin type of a connected ADE diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl std::fmt::Display for DynkinType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A({n})"),
            DynkinType::D(n) => write!(f, "D({n})"),
            DynkinType::E(n) => write!(f, "E({n})"),
        }
    }
}

impl Serialize for DynkinType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl DynkinType {
    pub fn rank(&self) -> usize {
        match *self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    /// Edges in the node order used throughout this module.
    ///
    /// `A_n` is a path. `D_n` and `E_n` list the longest arm from its tip to
    /// the branch node, then the remaining arms from the branch outwards,
    /// longer arm first.
    fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            DynkinType::A(n) => (1..n).map(|i| (i - 1, i)).collect(),
            DynkinType::D(n) => {
                let c = n - 3;
                let mut e: Vec<_> = (1..=c).map(|i| (i - 1, i)).collect();
                e.push((c, n - 2));
                e.push((c, n - 1));
                e
            }
            DynkinType::E(n) => {
                let c = n - 4;
                let mut e: Vec<_> = (1..=c).map(|i| (i - 1, i)).collect();
                e.push((c, c + 1));
                e.push((c + 1, c + 2));
                e.push((c, c + 3));
                e
            }
        }
    }

    /// Negated Cartan matrix: `-2` on the diagonal, `1` on edges.
    pub fn negated_cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = -2;
        }
        for (i, j) in self.edges() {
            m[i][j] = 1;
            m[j][i] = 1;
        }
        m
    }
}

fn h_minus(k: usize, idx: &[usize]) -> RationalClass {
    let mut b = vec![0i64; k];
    for &i in idx {
        b[i - 1] += 1;
    }
    RationalClass::from_i64(1, &b)
}

fn e_diff(k: usize, i: usize, j: usize) -> RationalClass {
    RationalClass::exceptional(k, i).add(&RationalClass::exceptional(k, j).neg())
}

/// Standard vertex classes of a Dynkin type together with the classes of the
/// compactifying divisor, on `CP^2 # k` with `k` the minimal number of points.
pub fn standard_ade(t: DynkinType) -> Option<(usize, Vec<RationalClass>, Vec<RationalClass>)> {
    let one_to = |n: usize| (1..=n).collect::<Vec<_>>();
    match t {
        DynkinType::A(n) if n >= 1 => {
            let k = n + 1;
            let ls = (1..=n).map(|i| e_diff(k, i, i + 1)).collect();
            let ds = vec![RationalClass::line(k), h_minus(k, &one_to(k))];
            Some((k, ls, ds))
        }
        DynkinType::D(n) if n >= 4 => {
            let k = n + 3;
            let mut ls = vec![
                e_diff(k, 4, 5),
                h_minus(k, &[3, 4, 5]).neg(),
                e_diff(k, 6, 4),
            ];
            ls.extend((6..=n + 2).map(|j| e_diff(k, j + 1, j)));
            let mut conic: Vec<usize> = vec![1, 2];
            conic.extend(4..=k);
            let mut two_h = h_minus(k, &conic);
            two_h.a = BigInt::from(2);
            let ds = vec![
                RationalClass::exceptional(k, 1),
                e_diff(k, 2, 1),
                h_minus(k, &[1, 2, 3]),
                two_h,
            ];
            Some((k, ls, ds))
        }
        DynkinType::E(n) if (6..=8).contains(&n) => {
            let k = n + 3;
            let mut conic = h_minus(k, &[4, 5, 6, 7, 8, 9]);
            conic.a = BigInt::from(2);
            let mut ls = vec![
                conic.neg(),
                h_minus(k, &[4, 7, 9]),
                e_diff(k, 6, 7),
                e_diff(k, 5, 6),
                e_diff(k, 8, 5),
                e_diff(k, 4, 7),
            ];
            if n >= 7 {
                ls.push(h_minus(k, &[8, 9, 10]));
            }
            if n == 8 {
                ls.push(e_diff(k, 10, 11));
            }
            let mut cubic = h_minus(k, &(4..=k).collect::<Vec<_>>());
            cubic.a = BigInt::from(3);
            cubic.b[2] = BigInt::from(2);
            let e3 = RationalClass::exceptional(k, 3)
                .add(&RationalClass::exceptional(k, 2).neg())
                .add(&RationalClass::exceptional(k, 1).neg());
            let ds = vec![RationalClass::exceptional(k, 1), e_diff(k, 2, 1), e3, cubic];
            Some((k, ls, ds))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatchKind {
    #[serde(rename = "standard-form match")]
    StandardForm,
    #[serde(rename = "Cartan-only match")]
    CartanOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdePattern {
    #[serde(rename = "type")]
    pub dynkin: DynkinType,
    /// Input classes with the signs in `signs` applied.
    pub classes: Vec<Class>,
    pub signs: Vec<i8>,
    /// `correspondence[i]` is the diagram node of input class `i`.
    pub correspondence: Vec<usize>,
    pub match_kind: MatchKind,
    /// Present for a standard-form match.
    pub compactifying_divisors: Vec<Class>,
    /// Reduced representative of each input class.
    pub reduced_forms: Vec<Class>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("not an ADE configuration: {reason}")]
pub struct NotAde {
    pub reason: String,
}

fn reject<T>(reason: impl Into<String>) -> Result<T, NotAde> {
    Err(NotAde {
        reason: reason.into(),
    })
}

/// Canonical node order for a Dynkin tree, or a reason it is not one.
fn dynkin_order(adj: &[Vec<usize>]) -> Result<(DynkinType, Vec<usize>), NotAde> {
    let n = adj.len();
    let walk = |from: usize, start: usize| -> Vec<usize> {
        let mut arm = vec![start];
        let (mut prev, mut cur) = (from, start);
        while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev) {
            if adj[cur].len() != 2 {
                break;
            }
            arm.push(nx);
            prev = cur;
            cur = nx;
        }
        arm
    };
    let branch: Vec<usize> = (0..n).filter(|&i| adj[i].len() >= 3).collect();
    if branch.is_empty() {
        let start = (0..n).find(|&i| adj[i].len() <= 1).unwrap_or(0);
        let mut order = vec![start];
        if n > 1 {
            order.extend(walk(start, adj[start][0]));
        }
        return Ok((DynkinType::A(n), order));
    }
    if branch.len() > 1 || adj[branch[0]].len() > 3 {
        return reject("diagram has more than one branch point or a node of degree > 3");
    }
    let c = branch[0];
    let mut arms: Vec<Vec<usize>> = adj[c].iter().map(|&s| walk(c, s)).collect();
    arms.sort_by_key(|a| std::cmp::Reverse(a.len()));
    let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
    let t = match lens[..] {
        [r, 1, 1] => DynkinType::D(r + 3),
        [2, 2, 1] => DynkinType::E(6),
        [3, 2, 1] => DynkinType::E(7),
        [4, 2, 1] => DynkinType::E(8),
        _ => {
            return reject(format!(
                "branched tree with arms {lens:?} is not a Dynkin diagram"
            ))
        }
    };
    let mut order: Vec<usize> = arms[0].iter().rev().copied().collect();
    order.push(c);
    order.extend(arms[1].iter().copied());
    order.extend(arms[2].iter().copied());
    Ok((t, order))
}

fn same_up_to_sign(xs: &[RationalClass], ys: &[RationalClass]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let key = |c: &RationalClass| {
        let n = c.neg();
        let (p, q) = (c.to_i64(), n.to_i64());
        p.max(q)
    };
    let mut a: Vec<_> = xs.iter().map(key).collect();
    let mut b: Vec<_> = ys.iter().map(key).collect();
    a.sort();
    b.sort();
    a == b
}

/// Recognizes a connected ADE plumbing of `(-2)`-classes.
///
/// The pairing matrix, after choosing signs so that adjacent classes pair to
/// `+1`, must equal the negated Cartan matrix of the matched type. When
/// `omega` is given every class must have zero area. The match is reported as
/// standard-form when the classes coincide up to sign and order with the
/// standard list on the same manifold.
pub fn recognize_ade(
    classes: &[Class],
    omega: Option<&CohomologyClass>,
    m: &Manifold,
) -> Result<AdePattern, NotAde> {
    let n = classes.len();
    if n == 0 {
        return reject("no classes");
    }
    for (i, c) in classes.iter().enumerate() {
        if let Err(e) = c.check(m) {
            return reject(format!("class {i}: {e}"));
        }
        let sq = c.dot(c);
        if sq != BigInt::from(-2) {
            return reject(format!("class {i} has square {sq}, not -2"));
        }
    }
    let mut gram = vec![vec![0i64; n]; n];
    let mut adj = vec![Vec::new(); n];
    let mut edges = 0;
    for i in 0..n {
        for j in 0..n {
            let p = classes[i].dot(&classes[j]);
            let v: i64 = match i64::try_from(&p) {
                Ok(v) if i == j || v.abs() <= 1 => v,
                _ => return reject(format!("classes {i}, {j} pair to {p}")),
            };
            gram[i][j] = v;
            if i != j && v != 0 {
                adj[i].push(j);
                if i < j {
                    edges += 1;
                }
            }
        }
    }
    let mut signs = vec![0i8; n];
    signs[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if signs[w] == 0 {
                signs[w] = signs[u] * gram[u][w] as i8;
                queue.push_back(w);
            }
        }
    }
    if signs.contains(&0) {
        return reject("intersection graph is disconnected");
    }
    if edges != n - 1 {
        return reject("intersection graph contains a cycle");
    }
    let (dynkin, order) = dynkin_order(&adj)?;
    let mut correspondence = vec![0usize; n];
    for (node, &i) in order.iter().enumerate() {
        correspondence[i] = node;
    }
    let cartan = dynkin.negated_cartan();
    for i in 0..n {
        for j in 0..n {
            let v = gram[i][j] * i64::from(signs[i]) * i64::from(signs[j]);
            if v != cartan[correspondence[i]][correspondence[j]] {
                return reject(format!(
                    "pairing matrix differs from the {dynkin} Cartan matrix"
                ));
            }
        }
    }
    if let Some(w) = omega {
        for (i, c) in classes.iter().enumerate() {
            match pair_mixed(w, c, m) {
                Ok(x) if x.is_zero() => {}
                Ok(x) => return reject(format!("omega has area {x} on class {i}")),
                Err(e) => return reject(e.to_string()),
            }
        }
    }
    let signed: Vec<Class> = classes
        .iter()
        .zip(&signs)
        .map(|(c, &s)| c.scaled(&BigInt::from(s)))
        .collect();
    let reduced_forms = classes
        .iter()
        .map(|c| match c {
            Class::Rational(r) => Class::Rational(reduce(r).result),
            other => other.clone(),
        })
        .collect();
    let mut match_kind = MatchKind::CartanOnly;
    let mut compactifying_divisors = Vec::new();
    if let (Manifold::Rational { k }, Some((k0, ls, ds))) = (m, standard_ade(dynkin)) {
        if *k >= k0 {
            let emb = |v: &[RationalClass]| -> Vec<RationalClass> {
                v.iter().map(|c| c.embed(*k).expect("k >= k0")).collect()
            };
            let input: Vec<RationalClass> = classes
                .iter()
                .filter_map(|c| c.as_rational().cloned())
                .collect();
            if same_up_to_sign(&input, &emb(&ls)) {
                match_kind = MatchKind::StandardForm;
                compactifying_divisors = emb(&ds).into_iter().map(Class::Rational).collect();
            }
        }
    }
    Ok(AdePattern {
        dynkin,
        classes: signed,
        signs,
        correspondence,
        match_kind,
        compactifying_divisors,
        reduced_forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::{parse_class, parse_cohomology};

    fn cls(s: &str, m: &Manifold) -> Class {
        parse_class(s, m).unwrap()
    }

    #[test]
    fn validation_examples() {
        let m = Manifold::rational(3);
        let vs = vec![cls("E1 -E2", &m), cls("E2 -E3", &m)];
        let g = Configuration::new(
            vs.clone(),
            vec![Edge {
                i: 0,
                j: 1,
                labels: vec![1],
            }],
        );
        assert!(validate_configuration(&g, &m).valid);
        let g = Configuration::new(
            vs,
            vec![Edge {
                i: 0,
                j: 1,
                labels: vec![2],
            }],
        );
        let r = validate_configuration(&g, &m);
        assert!(!r.valid);
        assert_eq!(r.diagnostics[0].code, "label_sum_mismatch");
        let g = Configuration::new(vec![cls("E1", &m), cls("E1", &m)], vec![]);
        let r = validate_configuration(&g, &m);
        assert_eq!(r.diagnostics[0].code, "negative_intersection");
        let g = Configuration::new(
            vec![cls("E1", &m)],
            vec![Edge {
                i: 0,
                j: 0,
                labels: vec![1],
            }],
        );
        assert_eq!(
            validate_configuration(&g, &m).diagnostics[0].code,
            "self_edge"
        );
    }

    #[test]
    fn json_loading() {
        let m = Manifold::rational(3);
        let g = Configuration::from_json(
            r#"{"vertices": ["E1 -E2", "E2 -E3"], "edges": [{"i": 0, "j": 1, "labels": [1]}]}"#,
            &m,
        )
        .unwrap();
        assert!(validate_configuration(&g, &m).valid);
        assert!(Configuration::from_json(r#"{"vertices": ["E4"]}"#, &m).is_err());
    }

    #[test]
    fn positivity_examples() {
        let m = Manifold::rational(5);
        let w = parse_cohomology("3H -1/10E1 .. -1/10E5", &m).unwrap();
        let g = Configuration::new(vec![cls("E1", &m)], vec![]);
        assert!(is_g_positive(&w, &g, &m).unwrap());
        let g = Configuration::new(vec![cls("E1 -E2", &m)], vec![]);
        assert!(!is_g_positive(&w, &g, &m).unwrap());
        let h = parse_cohomology("H", &m).unwrap();
        let g = Configuration::new(vec![cls("H -E1 .. -E5", &m)], vec![]);
        assert!(is_g_positive(&h, &g, &m).unwrap());
    }

    #[test]
    fn exceptional_examples() {
        let m = Manifold::rational(2);
        let l = enumerate_exceptional(&Class::canonical_std(&m), &m, 2).unwrap();
        let want = ["E1", "E2", "H -E1 -E2"].map(|s| cls(s, &m));
        assert_eq!(l.classes.len(), 3);
        assert!(want.iter().all(|w| l.classes.contains(w)));
        assert!(l.complete);
        let m1 = Manifold::rational(1);
        let l = enumerate_exceptional(&Class::canonical_std(&m1), &m1, 3).unwrap();
        assert_eq!(l.classes, vec![cls("E1", &m1)]);
        let m3 = Manifold::rational(3);
        let l = enumerate_exceptional(&Class::canonical_std(&m3), &m3, 1).unwrap();
        assert_eq!(l.classes.len(), 6);
        let m9 = Manifold::rational(9);
        assert!(
            !enumerate_exceptional(&Class::canonical_std(&m9), &m9, 2)
                .unwrap()
                .complete
        );
    }

    #[test]
    fn exceptional_counts_del_pezzo() {
        let counts = [1, 3, 6, 10, 16, 27, 56, 240];
        for (k, &want) in (1..=8).zip(&counts) {
            let m = Manifold::rational(k);
            let l = enumerate_exceptional(&Class::canonical_std(&m), &m, 7).unwrap();
            assert_eq!(l.classes.len(), want, "k = {k}");
        }
    }

    #[test]
    fn cone_examples() {
        let m = Manifold::rational(3);
        let k = Class::canonical_std(&m);
        let a = parse_cohomology("3H -1/10E1 .. -1/10E3", &m).unwrap();
        let v = Configuration::new(vec![cls("H -E1 -E2 -E3", &m)], vec![]);
        assert!(in_relative_cone(&a, &v, &k, &m, 3).unwrap().in_cone);
        let b = parse_cohomology("H -E1", &m).unwrap();
        let v = Configuration::new(vec![cls("E2 -E3", &m)], vec![]);
        assert!(!in_relative_cone(&b, &v, &k, &m, 3).unwrap().in_cone);
        let m1 = Manifold::rational(1);
        let c = parse_cohomology("H -2E1", &m1).unwrap();
        let r = in_relative_cone(
            &c,
            &Configuration::new(vec![], vec![]),
            &Class::canonical_std(&m1),
            &m1,
            3,
        )
        .unwrap();
        assert!(!r.in_cone);
        assert!(
            !r.conditions
                .iter()
                .find(|c| c.name == "alpha^2 > 0")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn inflation_examples() {
        let m = Manifold::rational(1);
        let k = Class::canonical_std(&m);
        let w = parse_cohomology("H -1/3E1", &m).unwrap();
        let v = Configuration::new(vec![cls("E1", &m)], vec![]);
        let big = cls("30H -9E1", &m);
        assert!(
            inflation_class_check(&big, &v, &k, &w, &m, 4)
                .unwrap()
                .all_pass
        );
        let e1 = cls("E1", &m);
        let r = inflation_class_check(&e1, &v, &k, &w, &m, 4).unwrap();
        assert!(!r.conditions[0].passed);
        // (A - K).E1 = 0 for A = 2H + E1
        let a = cls("2H +E1", &m);
        let r = inflation_class_check(&a, &v, &k, &w, &m, 4).unwrap();
        assert!(!r.all_pass);
        assert!(
            !r.conditions
                .iter()
                .find(|c| c.name == "(A-K).V_0 > 0")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn ade_standard_lists() {
        for t in (1..=10)
            .map(DynkinType::A)
            .chain((4..=8).map(DynkinType::D))
            .chain((6..=8).map(DynkinType::E))
        {
            let (k, ls, ds) = standard_ade(t).unwrap();
            let m = Manifold::rational(k);
            let cs: Vec<Class> = ls.iter().cloned().map(Class::Rational).collect();
            let p = recognize_ade(&cs, None, &m).unwrap();
            assert_eq!(p.dynkin, t);
            assert_eq!(p.match_kind, MatchKind::StandardForm);
            for d in &ds {
                for l in &ls {
                    assert_eq!(d.dot(l), BigInt::from(0), "{t}: {d} . {l}");
                }
            }
        }
    }

    #[test]
    fn ade_examples() {
        let m = Manifold::rational(7);
        let lit = ["E4 -E5", "-H +E4 +E5 +E6", "E6 -E4", "E7 -E6"].map(|s| cls(s, &m));
        assert_eq!(
            recognize_ade(&lit, None, &m).unwrap().dynkin,
            DynkinType::A(4)
        );
        let fixed = ["E4 -E5", "-H +E3 +E4 +E5", "E6 -E4", "E7 -E6"].map(|s| cls(s, &m));
        assert_eq!(
            recognize_ade(&fixed, None, &m).unwrap().dynkin,
            DynkinType::D(4)
        );
        let disjoint = ["E1 -E2", "E3 -E4"].map(|s| cls(s, &m));
        assert!(recognize_ade(&disjoint, None, &m).is_err());
        assert!(recognize_ade(&[cls("E1", &m)], None, &m).is_err());
        let w = parse_cohomology("3H -1/10E1 .. -1/10E7", &m).unwrap();
        let a2 = ["E1 -E2", "E2 -E3"].map(|s| cls(s, &m));
        let p = recognize_ade(&a2, Some(&w), &m).unwrap();
        assert_eq!(p.dynkin, DynkinType::A(2));
        assert_eq!(p.match_kind, MatchKind::StandardForm);
        assert_eq!(p.compactifying_divisors.len(), 2);
        let shifted = ["E2 -E3", "E4 -E3"].map(|s| cls(s, &m));
        let p = recognize_ade(&shifted, None, &m).unwrap();
        assert_eq!(p.dynkin, DynkinType::A(2));
        assert_eq!(p.signs, vec![1, -1]);
        assert_eq!(p.match_kind, MatchKind::CartanOnly);
        assert!(p.compactifying_divisors.is_empty());
        let w2 = parse_cohomology("3H -1/10E1 -2/10E2", &m).unwrap();
        assert!(recognize_ade(&a2, Some(&w2), &m).is_err());
    }
}
