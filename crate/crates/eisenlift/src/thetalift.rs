//! Closed-form theta lift of caps, unimodular symbols and Γ₁(N) cycles, and
//! exact verification of the Eisenstein relations attached to unimodular
//! triangles and polygons.
//!
//! Caps lift to `H^(2)`, unimodular symbols `γ{0,∞}` with `γ = (a,b;c,d)` to
//! `−G^(1)_d·G^(1)_c`, and a cycle to the sum over its decomposition.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::eisenstein::{EisensteinId, SeriesCache};
use crate::error::{invalid, Error, Result};
use crate::exactcore::{extended_gcd, residue_big, CycElem, Rat};
use crate::modsym::{check_cycle_input, classify, decompose_cycle, unimodular_matrix, CycleDecomposition, Cusp, MatZ, MatrixClass};
use crate::qseries::QSeries;
use crate::wire;

/// Orientation sign of cap lifts inside boundary sums, frozen so that the
/// boundary of the reference triangle at level 5 lifts to zero.
pub const CAP_ORIENTATION: i64 = 1;

/// A relation check is only meaningful with at least this many nonzero
/// coefficients compared.
pub const MIN_NONZERO_COMPARED: usize = 5;

/// Evaluates lifts at one level and precision, drawing expansions from a
/// [`SeriesCache`].
#[derive(Clone, Copy)]
pub struct ThetaLift<'a> {
    level: u32,
    prec: i64,
    cache: &'a SeriesCache,
}

impl ThetaLift<'static> {
    /// Uses the process-wide in-memory cache.
    pub fn new(level: u32, prec: i64) -> Result<Self> {
        Self::with_cache(level, prec, SeriesCache::global())
    }
}

impl<'a> ThetaLift<'a> {
    pub fn with_cache(level: u32, prec: i64, cache: &'a SeriesCache) -> Result<Self> {
        if level == 0 {
            return invalid("level must be positive");
        }
        if prec < 1 {
            return invalid(format!("precision {prec} must be at least 1"));
        }
        Ok(ThetaLift { level, prec, cache })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    fn zero(&self) -> QSeries {
        QSeries::zero(self.level, self.level as i64 * self.prec)
    }

    fn series(&self, id: Result<EisensteinId>) -> Result<QSeries> {
        Ok((*self.cache.get(&id?, self.prec)?).clone())
    }

    pub fn g1(&self, r: i64) -> Result<QSeries> {
        self.series(EisensteinId::g(1, r, self.level))
    }

    pub fn g2(&self, r: i64) -> Result<QSeries> {
        self.series(EisensteinId::g(2, r, self.level))
    }

    pub fn h(&self, p: i64, q: i64) -> Result<QSeries> {
        let n = self.level as i64;
        // H_{p,q} = G^(2)_q unless q ≡ 0; share one cache entry per class
        if q.rem_euclid(n) != 0 {
            return self.g2(q);
        }
        self.series(EisensteinId::h(p, 0, self.level))
    }

    fn g1_product(&self, i: i64, j: i64) -> Result<QSeries> {
        Ok((*self.cache.g1_product(i, j, self.level, self.prec)?).clone())
    }

    /// Lift of the cap at `γ_r∞` for `γ_r = (m, i; n, j)`: `H^(2)_{j,−n}`.
    pub fn cap(&self, gamma_r: &MatZ) -> Result<QSeries> {
        require_det_one(gamma_r)?;
        let (j, n) = (self.res(&gamma_r.d), self.res(&gamma_r.c));
        self.h(j, -n)
    }

    /// Lift of `γ{0,∞}` for `γ = (a, b; c, d)`: `−G^(1)_d·G^(1)_c`.
    pub fn unimodular(&self, g: &MatZ) -> Result<QSeries> {
        require_det_one(g)?;
        Ok(self.g1_product(self.res(&g.d), self.res(&g.c))?.neg())
    }

    fn res(&self, x: &BigInt) -> i64 {
        residue_big(x, self.level) as i64
    }

    /// Sums the lifts of all caps and symbols of a decomposition, grouping
    /// terms that share a series first.
    pub fn decomposition(&self, dec: &CycleDecomposition) -> Result<QSeries> {
        let n = self.level as i64;
        let mut caps: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for cap in &dec.caps {
            require_det_one(&cap.gamma_r)?;
            let (p, q) = (self.res(&cap.gamma_r.d), (-self.res(&cap.gamma_r.c)).rem_euclid(n));
            let key = if q != 0 { (0, q) } else { (p, 0) };
            *caps.entry(key).or_insert_with(BigInt::zero) += &cap.coeff;
        }
        let mut products: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for s in &dec.symbols {
            require_det_one(&s.gamma)?;
            let (d, c) = (self.res(&s.gamma.d), self.res(&s.gamma.c));
            if d == 0 || c == 0 {
                continue;
            }
            *products.entry((d.min(c), d.max(c))).or_insert_with(BigInt::zero) -= &s.coeff;
        }
        let mut total = self.zero();
        for ((p, q), k) in caps {
            if !k.is_zero() {
                total = total.add(&self.h(p, q)?.scale_rat(&Rat::from_integer(k)))?;
            }
        }
        for ((i, j), k) in products {
            if !k.is_zero() {
                total = total.add(&self.g1_product(i, j)?.scale_rat(&Rat::from_integer(k)))?;
            }
        }
        Ok(total)
    }

    /// Lift of the cycle of `γ ∈ Γ₁(N)`; zero for the identity.
    pub fn cycle(&self, g: &MatZ) -> Result<QSeries> {
        check_cycle_input(g, self.level)?;
        if classify(g)? == MatrixClass::Identity {
            return Ok(self.zero());
        }
        self.decomposition(&decompose_cycle(g, self.level)?)
    }
}

fn require_det_one(g: &MatZ) -> Result<()> {
    if !g.is_sl2() {
        return Err(Error::Determinant(g.det().to_string()));
    }
    Ok(())
}

/// `H^(2)_{j,−n}` for `γ_r = (m, i; n, j)`.
pub fn lift_cap(gamma_r: &MatZ, n: u32, prec: i64) -> Result<QSeries> {
    ThetaLift::new(n, prec)?.cap(gamma_r)
}

/// `−G^(1)_d·G^(1)_c` for `γ = (a, b; c, d)`.
pub fn lift_unimodular(g: &MatZ, n: u32, prec: i64) -> Result<QSeries> {
    ThetaLift::new(n, prec)?.unimodular(g)
}

/// The lift of the cycle of `γ ∈ Γ₁(N)`, assembled from
/// [`decompose_cycle`].
///
/// ```
/// use eisenlift::{thetalift::lift_cycle, MatZ};
/// let g = MatZ::new(1, 1, 4, 5);
/// let lift = lift_cycle(&g, 4, 10).unwrap();
/// let inverse = lift_cycle(&g.inverse(), 4, 10).unwrap();
/// assert!(lift.add(&inverse).unwrap().is_zero());
/// ```
pub fn lift_cycle(g: &MatZ, n: u32, prec: i64) -> Result<QSeries> {
    ThetaLift::new(n, prec)?.cycle(g)
}

/// The unimodular triangle built from three residues summing to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    /// Integer representatives with `n₁ + n₂ + n₃ = 0`.
    pub n: [i64; 3],
    /// `m₁n₂ − m₂n₁ = 1` and `m₃ = −m₁ − m₂`.
    pub m: [BigInt; 3],
    /// `γ₁₂ = (m₂, m₁; −n₂, −n₁)`, `γ₂₃`, `γ₃₁`.
    pub sides: [MatZ; 3],
    /// Cap matrices at the three vertices: `γ₃₁`, `γ₁₂`, `γ₂₃`.
    pub caps: [MatZ; 3],
}

impl Triangle {
    /// Vertices `[m_i : −n_i]`, in the order traversed by the sides.
    pub fn vertices(&self) -> Vec<Cusp> {
        (0..3)
            .map(|i| Cusp::new(self.m[i].clone(), -self.n[i]).expect("coprime vertex"))
            .collect()
    }
}

fn check_triple(n: u32, t: [i64; 3]) -> Result<()> {
    if n < 4 {
        return invalid(format!("level {n} must be at least 4"));
    }
    for (i, x) in t.iter().enumerate() {
        if x.gcd(&(n as i64)) != 1 {
            return invalid(format!("n{} = {x} is not coprime to {n}", i + 1));
        }
    }
    if (t[0] + t[1] + t[2]).rem_euclid(n as i64) != 0 {
        return invalid(format!("{} + {} + {} is not divisible by {n}", t[0], t[1], t[2]));
    }
    Ok(())
}

/// Shifts `(n₁, n₂, n₃)` by multiples of `N` so that `gcd(n₁, n₂) = 1` and
/// the sum is zero, then builds the triangle's side and cap matrices.
pub fn build_triangle(n: u32, n1: i64, n2: i64, n3: i64) -> Result<Triangle> {
    check_triple(n, [n1, n2, n3])?;
    let nn = n as i64;
    let k2 = if n1.abs() == 1 {
        0
    } else {
        let m = BigInt::from(n1.abs());
        let inv = crate::exactcore::mod_inverse(&BigInt::from(nn), &m).expect("N is a unit mod n1");
        let k = (BigInt::from(n2 - 1) * inv).mod_floor(&m);
        i64::try_from(k).expect("small shift")
    };
    let s2 = n2 - k2 * nn;
    let s3 = -n1 - s2;
    let (g, x, y) = extended_gcd(&BigInt::from(s2), &BigInt::from(n1))?;
    debug_assert!(g.is_one());
    let (m1, m2) = (x, -y);
    let m3 = -(&m1 + &m2);
    let nv = [n1, s2, s3];
    let m = [m1, m2, m3];
    let side = |i: usize, j: usize| MatZ::new(m[j].clone(), m[i].clone(), -nv[j], -nv[i]);
    let sides = [side(0, 1), side(1, 2), side(2, 0)];
    let caps = [sides[2].clone(), sides[0].clone(), sides[1].clone()];
    Ok(Triangle { n: nv, m, sides, caps })
}

/// All ordered triples `1 ≤ n_i < N`, each coprime to `N`, with
/// `n₁ + n₂ + n₃ ≡ 0 (mod N)`.
pub fn triangle_triples(n: u32) -> Vec<[i64; 3]> {
    let nn = n as i64;
    let units: Vec<i64> = (1..nn).filter(|x| x.gcd(&nn) == 1).collect();
    let mut out = Vec::new();
    for &a in &units {
        for &b in &units {
            let c = (-a - b).rem_euclid(nn);
            if units.contains(&c) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Triangle,
    Polygon,
    BoundaryZero,
}

impl RelationKind {
    fn as_str(self) -> &'static str {
        match self {
            RelationKind::Triangle => "triangle",
            RelationKind::Polygon => "polygon",
            RelationKind::BoundaryZero => "boundary-zero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationData {
    Triple { n: [i64; 3], pairwise_coprime: bool },
    Cusps(Vec<Cusp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationStatus {
    Verified { nonzero_compared: usize },
    Failed { e: i64, lhs: CycElem, rhs: CycElem },
    Rejected { reason: String },
}

/// Outcome of a relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub level: u32,
    pub kind: RelationKind,
    pub data: RelationData,
    /// Number of integral q-powers compared.
    pub prec: i64,
    pub status: RelationStatus,
}

impl RelationReport {
    pub fn is_verified(&self) -> bool {
        matches!(self.status, RelationStatus::Verified { .. })
    }

    /// 0 verified, 1 failed, 2 rejected.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            RelationStatus::Verified { .. } => 0,
            RelationStatus::Failed { .. } => 1,
            RelationStatus::Rejected { .. } => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let data = match &self.data {
            RelationData::Triple { n, pairwise_coprime } => json!({"n": n, "pairwise_coprime": pairwise_coprime}),
            RelationData::Cusps(c) => json!({"cusps": c.iter().map(Cusp::to_string).collect::<Vec<_>>()}),
        };
        let mut v = json!({
            "level": self.level,
            "kind": self.kind.as_str(),
            "data": data,
            "prec": self.prec,
        });
        let obj = v.as_object_mut().expect("object");
        match &self.status {
            RelationStatus::Verified { nonzero_compared } => {
                obj.insert("status".into(), "verified".into());
                obj.insert("nonzero_compared".into(), (*nonzero_compared).into());
            }
            RelationStatus::Failed { e, lhs, rhs } => {
                obj.insert("status".into(), "failed".into());
                obj.insert("mismatch".into(), json!({"e": e, "lhs": lhs.to_strings(), "rhs": rhs.to_strings()}));
            }
            RelationStatus::Rejected { reason } => {
                obj.insert("status".into(), "rejected".into());
                obj.insert("reason".into(), reason.clone().into());
            }
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let level = u32::try_from(wire::i64_field(v, "level")?).map_err(|_| Error::Parse("bad level".into()))?;
        let kind = match wire::str_field(v, "kind")? {
            "triangle" => RelationKind::Triangle,
            "polygon" => RelationKind::Polygon,
            "boundary-zero" => RelationKind::BoundaryZero,
            other => return Err(Error::Parse(format!("unknown relation kind {other:?}"))),
        };
        let d = wire::field(v, "data")?;
        let data = if let Some(n) = d.get("n") {
            let n: [i64; 3] = serde_json::from_value(n.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            let pairwise_coprime = d
                .get("pairwise_coprime")
                .and_then(Value::as_bool)
                .ok_or_else(|| Error::Parse("missing pairwise_coprime".into()))?;
            RelationData::Triple { n, pairwise_coprime }
        } else {
            let c: Vec<Cusp> = serde_json::from_value(wire::field(d, "cusps")?.clone())
                .map_err(|e| Error::Parse(e.to_string()))?;
            RelationData::Cusps(c)
        };
        let status = match wire::str_field(v, "status")? {
            "verified" => RelationStatus::Verified {
                nonzero_compared: wire::i64_field(v, "nonzero_compared")? as usize,
            },
            "failed" => {
                let m = wire::field(v, "mismatch")?;
                let side = |key: &str| -> Result<CycElem> {
                    let s: Vec<String> = serde_json::from_value(wire::field(m, key)?.clone())
                        .map_err(|e| Error::Parse(e.to_string()))?;
                    CycElem::from_strings(level, &s)
                };
                RelationStatus::Failed { e: wire::i64_field(m, "e")?, lhs: side("lhs")?, rhs: side("rhs")? }
            }
            "rejected" => RelationStatus::Rejected { reason: wire::str_field(v, "reason")?.to_string() },
            other => return Err(Error::Parse(format!("unknown status {other:?}"))),
        };
        Ok(RelationReport { level, kind, data, prec: wire::i64_field(v, "prec")?, status })
    }
}

impl Serialize for RelationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelationReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RelationReport::from_json(&Value::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let data = match &self.data {
            RelationData::Triple { n, .. } => format!("({},{},{})", n[0], n[1], n[2]),
            RelationData::Cusps(c) => {
                format!("[{}]", c.iter().map(Cusp::to_string).collect::<Vec<_>>().join(", "))
            }
        };
        let head = format!("N={} {} {} prec={}", self.level, self.kind.as_str(), data, self.prec);
        match &self.status {
            RelationStatus::Verified { nonzero_compared } => {
                write!(f, "verified {head} ({nonzero_compared} nonzero coefficients compared)")
            }
            RelationStatus::Failed { e, lhs, rhs } => {
                write!(f, "failed {head}: exponent {e}/{}: lhs {lhs} != rhs {rhs}", self.level)
            }
            RelationStatus::Rejected { reason } => write!(f, "rejected {head}: {reason}"),
        }
    }
}

fn compare(lhs: &QSeries, rhs: &QSeries) -> RelationStatus {
    if let Some((e, l, r)) = lhs.first_mismatch(rhs) {
        return RelationStatus::Failed { e, lhs: l, rhs: r };
    }
    let nonzero_compared = lhs.num_terms();
    if nonzero_compared < MIN_NONZERO_COMPARED {
        return RelationStatus::Rejected {
            reason: format!("only {nonzero_compared} nonzero coefficients compared; raise the precision"),
        };
    }
    RelationStatus::Verified { nonzero_compared }
}

fn rejected(reason: impl fmt::Display) -> RelationStatus {
    RelationStatus::Rejected { reason: reason.to_string() }
}

/// Checks `Σ_cyc G^(1)_{n₁}G^(1)_{n₂} = G^(2)_{n₁} + G^(2)_{n₂} + G^(2)_{n₃}`
/// up to `q^prec`. Precondition failures give a rejected report.
///
/// ```
/// use eisenlift::thetalift::verify_triangle;
/// assert!(verify_triangle(5, 1, 1, 3, 20).is_verified());
/// ```
pub fn verify_triangle(n: u32, n1: i64, n2: i64, n3: i64, prec: i64) -> RelationReport {
    verify_triangle_with(SeriesCache::global(), n, n1, n2, n3, prec)
}

pub fn verify_triangle_with(cache: &SeriesCache, n: u32, n1: i64, n2: i64, n3: i64, prec: i64) -> RelationReport {
    let t = [n1, n2, n3];
    let pairwise_coprime = n1.gcd(&n2) == 1 && n2.gcd(&n3) == 1 && n3.gcd(&n1) == 1;
    let status = (|| -> Result<RelationStatus> {
        check_triple(n, t)?;
        let lift = ThetaLift::with_cache(n, prec, cache)?;
        let mut lhs = lift.zero();
        let mut rhs = lift.zero();
        for i in 0..3 {
            lhs = lhs.add(&lift.g1_product(t[i], t[(i + 1) % 3])?)?;
            rhs = rhs.add(&lift.g2(t[i])?)?;
        }
        Ok(compare(&lhs, &rhs))
    })()
    .unwrap_or_else(rejected);
    RelationReport { level: n, kind: RelationKind::Triangle, data: RelationData::Triple { n: t, pairwise_coprime }, prec, status }
}

/// Verifies every triangle relation at level `N`, spreading the work over
/// threads; the reports come back in [`triangle_triples`] order.
pub fn verify_all_triangles(n: u32, prec: i64) -> Vec<RelationReport> {
    let triples = triangle_triples(n);
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(8);
    let chunk = triples.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = triples
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|t| verify_triangle(n, t[0], t[1], t[2], prec)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("triangle worker panicked")).collect()
    })
}

struct Polygon {
    v: Vec<(BigInt, BigInt)>,
    // δ_i = det(v_i, v_{i+1}) = ±1
    delta: Vec<BigInt>,
}

fn det2(x: &(BigInt, BigInt), y: &(BigInt, BigInt)) -> BigInt {
    &x.0 * &y.1 - &y.0 * &x.1
}

fn check_polygon(n: u32, cusps: &[Cusp]) -> Result<Polygon> {
    if n < 4 {
        return invalid(format!("level {n} must be at least 4"));
    }
    let d = cusps.len();
    if d < 3 {
        return invalid(format!("a polygon needs at least 3 cusps, got {d}"));
    }
    let v: Vec<(BigInt, BigInt)> = cusps.iter().map(|c| (c.m().clone(), c.n().clone())).collect();
    let mut delta = Vec::with_capacity(d);
    for i in 0..d {
        let j = (i + 1) % d;
        let det = det2(&v[i], &v[j]);
        if det.abs() != BigInt::one() {
            return invalid(format!(
                "side {} ({} -> {}) is not unimodular: determinant {det}",
                i + 1,
                cusps[i],
                cusps[j]
            ));
        }
        delta.push(det);
    }
    for (i, c) in cusps.iter().enumerate() {
        if !c.n().gcd(&BigInt::from(n)).is_one() {
            return invalid(format!("cusp {} ({c}): denominator not coprime to {n}", i + 1));
        }
    }
    Ok(Polygon { v, delta })
}

impl Polygon {
    // coefficient of the cap at vertex i: δ_{i−1}·δ_i·det(v_{i−1}, v_{i+1})
    fn cap_coeff(&self, i: usize) -> BigInt {
        let d = self.v.len();
        let (prev, next) = ((i + d - 1) % d, (i + 1) % d);
        &self.delta[prev] * &self.delta[i] * det2(&self.v[prev], &self.v[next])
    }
}

/// Checks the relation of a unimodular polygon `[m_i : n_i]`:
/// `Σ δ_i G^(1)_{n_i}G^(1)_{n_{i+1}} = −Σ x_i G^(2)_{n_i}` with
/// `δ_i = m_i n_{i+1} − m_{i+1} n_i = ±1` and
/// `x_i = δ_{i−1}δ_i(m_{i−1}n_{i+1} − m_{i+1}n_{i−1})`. For a triangle with
/// every `δ_i = 1` this reads `Σ G^(1)_{n_i}G^(1)_{n_{i+1}} = Σ G^(2)_{n_i}`.
pub fn verify_polygon(n: u32, cusps: &[Cusp], prec: i64) -> RelationReport {
    verify_polygon_with(SeriesCache::global(), n, cusps, prec)
}

pub fn verify_polygon_with(cache: &SeriesCache, n: u32, cusps: &[Cusp], prec: i64) -> RelationReport {
    let status = (|| -> Result<RelationStatus> {
        let poly = check_polygon(n, cusps)?;
        let lift = ThetaLift::with_cache(n, prec, cache)?;
        let d = cusps.len();
        let res = |x: &BigInt| residue_big(x, n) as i64;
        let mut lhs = lift.zero();
        let mut rhs = lift.zero();
        for i in 0..d {
            let j = (i + 1) % d;
            let prod = lift.g1_product(res(&poly.v[i].1), res(&poly.v[j].1))?;
            lhs = lhs.add(&prod.scale_rat(&Rat::from_integer(poly.delta[i].clone())))?;
            let g2 = lift.g2(res(&poly.v[i].1))?;
            rhs = rhs.add(&g2.scale_rat(&Rat::from_integer(-poly.cap_coeff(i))))?;
        }
        Ok(compare(&lhs, &rhs))
    })()
    .unwrap_or_else(rejected);
    RelationReport { level: n, kind: RelationKind::Polygon, data: RelationData::Cusps(cusps.to_vec()), prec, status }
}

/// Side lifts plus `sigma` times cap lifts around a unimodular polygon.
///
/// Side `i` is the symbol `γ_i{0,∞}` from cusp `i` to cusp `i+1`; the cap at
/// cusp `i` runs from cusp `i−1` to cusp `i+1`, which is `x_i` times the
/// closed cap of `γ_{i−1}`, where `x_i = γ_{i−1}⁻¹(cusp i+1)`.
pub fn boundary_total(n: u32, cusps: &[Cusp], prec: i64, sigma: i64) -> Result<QSeries> {
    check_polygon(n, cusps)?;
    let lift = ThetaLift::new(n, prec)?;
    let d = cusps.len();
    let sides: Vec<MatZ> = (0..d)
        .map(|i| unimodular_matrix(&cusps[i], &cusps[(i + 1) % d]).expect("checked unimodular"))
        .collect();
    let mut total = lift.zero();
    for g in &sides {
        total = total.add(&lift.unimodular(g)?)?;
    }
    for i in 0..d {
        let into = &sides[(i + d - 1) % d];
        let x = into.inverse().act(&cusps[(i + 1) % d]);
        debug_assert!(x.n().is_one());
        let k = Rat::from_integer(x.m() * sigma);
        total = total.add(&lift.cap(into)?.scale_rat(&k))?;
    }
    Ok(total)
}

/// Checks that the boundary of a unimodular polygon lifts to zero with the
/// frozen [`CAP_ORIENTATION`].
pub fn boundary_zero(n: u32, cusps: &[Cusp], prec: i64) -> RelationReport {
    let status = (|| -> Result<RelationStatus> {
        let total = boundary_total(n, cusps, prec, CAP_ORIENTATION)?;
        let zero = QSeries::zero(n, total.prec());
        Ok(match total.first_mismatch(&zero) {
            Some((e, l, r)) => RelationStatus::Failed { e, lhs: l, rhs: r },
            None => {
                // the individual side and cap lifts must be nontrivial for the
                // check to mean anything
                let witness = boundary_total(n, cusps, prec, 0)?.num_terms();
                if witness < MIN_NONZERO_COMPARED {
                    rejected(format!("only {witness} nonzero coefficients compared; raise the precision"))
                } else {
                    RelationStatus::Verified { nonzero_compared: witness }
                }
            }
        })
    })()
    .unwrap_or_else(rejected);
    RelationReport { level: n, kind: RelationKind::BoundaryZero, data: RelationData::Cusps(cusps.to_vec()), prec, status }
}
