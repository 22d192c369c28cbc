//! Integer matrices, cusps, negative (Hirzebruch–Jung) continued fractions,
//! the decomposition of a Γ₁(N) cycle into modular caps and unimodular
//! symbols, symbol reduction and Hecke coset representatives.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::exactcore::{extended_gcd, mod_inverse};
use crate::wire;

/// A 2×2 integer matrix `(a, b; c, d)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatZ {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl fmt::Debug for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for MatZ {
    type Err = Error;
    /// Parses the row-major form `a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("matrix needs 4 entries: {s:?}")));
        }
        let mut v = Vec::with_capacity(4);
        for p in parts {
            v.push(p.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad matrix entry {p:?}")))?);
        }
        let [a, b, c, d]: [BigInt; 4] = v.try_into().expect("four entries");
        Ok(MatZ { a, b, c, d })
    }
}

impl Serialize for MatZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MatZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl MatZ {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        MatZ { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// `S = (0, −1; 1, 0)`.
    pub fn s() -> Self {
        Self::new(0, -1, 1, 0)
    }

    /// `T^n = (1, n; 0, 1)`.
    pub fn t(n: impl Into<BigInt>) -> Self {
        Self::new(1, n, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &MatZ) -> MatZ {
        MatZ {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn neg(&self) -> MatZ {
        MatZ { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// The adjugate, which is the inverse when the determinant is 1.
    pub fn inverse(&self) -> MatZ {
        MatZ { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// `self^k`; negative powers use the adjugate.
    pub fn pow(&self, k: i64) -> MatZ {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = MatZ::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_sl2(&self) -> bool {
        self.det().is_one()
    }

    pub fn is_plus_minus_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && self.a.abs().is_one()
    }

    /// `a ≡ d ≡ 1`, `c ≡ 0 (mod N)` and determinant 1.
    pub fn in_gamma1(&self, n: u32) -> bool {
        let nn = BigInt::from(n);
        self.is_sl2()
            && (&self.a - 1u32).mod_floor(&nn).is_zero()
            && (&self.d - 1u32).mod_floor(&nn).is_zero()
            && self.c.mod_floor(&nn).is_zero()
    }

    /// Möbius action on a cusp.
    pub fn act(&self, r: &Cusp) -> Cusp {
        Cusp::new(&self.a * &r.m + &self.b * &r.n, &self.c * &r.m + &self.d * &r.n)
            .expect("nonsingular action keeps a nonzero vector")
    }

    fn require_sl2(&self) -> Result<()> {
        if !self.is_sl2() {
            return Err(Error::Determinant(self.det().to_string()));
        }
        Ok(())
    }
}

/// A cusp `[m : n] ∈ P¹(Q)`, normalized with `gcd(m, n) = 1`, `n ≥ 0`, and
/// `∞ = [1 : 0]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cusp {
    m: BigInt,
    n: BigInt,
}

impl Cusp {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        let (mut m, mut n) = (m.into(), n.into());
        if m.is_zero() && n.is_zero() {
            return invalid("cusp [0:0]");
        }
        let g = m.gcd(&n);
        m /= &g;
        n /= &g;
        if n.is_negative() || (n.is_zero() && m.is_negative()) {
            m = -m;
            n = -n;
        }
        Ok(Cusp { m, n })
    }

    pub fn infinity() -> Self {
        Cusp { m: BigInt::one(), n: BigInt::zero() }
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn is_infinity(&self) -> bool {
        self.n.is_zero()
    }
}

impl fmt::Debug for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.m, self.n)
        }
    }
}

impl FromStr for Cusp {
    type Err = Error;
    /// Accepts `inf`, `m/n` and plain integers.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Cusp::infinity());
        }
        let bad = || Error::Parse(format!("bad cusp {s:?}"));
        let (m, n) = match s.split_once('/') {
            Some((m, n)) => (m.trim(), n.trim()),
            None => (s, "1"),
        };
        Cusp::new(m.parse::<BigInt>().map_err(|_| bad())?, n.parse::<BigInt>().map_err(|_| bad())?)
    }
}

impl Serialize for Cusp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cusp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixClass {
    Identity,
    Elliptic,
    Parabolic(Cusp),
    Hyperbolic,
}

/// Classifies a determinant-one matrix by its trace; `±I` count as identity.
pub fn classify(g: &MatZ) -> Result<MatrixClass> {
    g.require_sl2()?;
    if g.is_plus_minus_identity() {
        return Ok(MatrixClass::Identity);
    }
    let t = g.trace().abs();
    let two = BigInt::from(2);
    Ok(if t > two {
        MatrixClass::Hyperbolic
    } else if t < two {
        MatrixClass::Elliptic
    } else if g.c.is_zero() {
        MatrixClass::Parabolic(Cusp::infinity())
    } else {
        MatrixClass::Parabolic(Cusp::new(&g.a - &g.d, &g.c * 2)?)
    })
}

/// Negative continued fraction `a/c = b₀ − 1/(b₁ − 1/(… − 1/b_n))` with its
/// convergents `p_k/q_k` for `k = −1..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinusCF {
    b: Vec<BigInt>,
    // index i holds p_{i−1}, so p[0] = p_{−1}
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl MinusCF {
    /// The last index `n`.
    pub fn n(&self) -> usize {
        self.b.len() - 1
    }

    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    /// `p_k` for `−1 ≤ k ≤ n`.
    pub fn p(&self, k: i64) -> &BigInt {
        &self.p[(k + 1) as usize]
    }

    pub fn q(&self, k: i64) -> &BigInt {
        &self.q[(k + 1) as usize]
    }

    /// Numerators `p_{−1}, p_0, …, p_n`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.p
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.q
    }

    /// The convergent `p_k/q_k` as a cusp.
    pub fn convergent(&self, k: i64) -> Cusp {
        Cusp::new(self.p(k).clone(), self.q(k).clone()).expect("convergents are coprime")
    }

    pub fn to_json(&self) -> Value {
        json!({"b": wire::ints_value(&self.b), "p": wire::ints_value(&self.p), "q": wire::ints_value(&self.q)})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let cf = MinusCF {
            b: wire::value_ints(wire::field(v, "b")?)?,
            p: wire::value_ints(wire::field(v, "p")?)?,
            q: wire::value_ints(wire::field(v, "q")?)?,
        };
        if cf.b.is_empty() || cf.p.len() != cf.b.len() + 1 || cf.q.len() != cf.p.len() {
            return Err(Error::Parse("inconsistent continued fraction lengths".into()));
        }
        Ok(cf)
    }
}

/// Canonical negative continued fraction of `a/c`: `b₀ = ⌈a/c⌉`, `b_k ≥ 2`.
///
/// ```
/// use eisenlift::modsym::minus_cf;
/// let cf = minus_cf(&7.into(), &3.into()).unwrap();
/// assert_eq!(cf.b(), &[3.into(), 2.into(), 2.into()]);
/// ```
pub fn minus_cf(a: &BigInt, c: &BigInt) -> Result<MinusCF> {
    if c.is_zero() {
        return invalid("continued fraction of a/0");
    }
    if !a.gcd(c).is_one() {
        return invalid(format!("{a}/{c} is not in lowest terms"));
    }
    let (mut num, mut den) = if c.is_negative() { (-a, -c) } else { (a.clone(), c.clone()) };
    let mut b = Vec::new();
    loop {
        let bk = -((-&num).div_floor(&den));
        let rest = &bk * &den - &num;
        b.push(bk);
        if rest.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, rest);
    }
    let mut p = vec![BigInt::one(), b[0].clone()];
    let mut q = vec![BigInt::zero(), BigInt::one()];
    for bk in &b[1..] {
        let l = p.len();
        p.push(bk * &p[l - 1] - &p[l - 2]);
        q.push(bk * &q[l - 1] - &q[l - 2]);
    }
    Ok(MinusCF { b, p, q })
}

/// `γ_k = (−p_k, p_{k−1}; −q_k, q_{k−1})`, and `γ_{−1} = I`.
pub fn gamma_k(cf: &MinusCF, k: i64) -> Result<MatZ> {
    if k < -1 || k > cf.n() as i64 {
        return invalid(format!("index {k} outside [-1, {}]", cf.n()));
    }
    if k == -1 {
        return Ok(MatZ::identity());
    }
    Ok(MatZ {
        a: -cf.p(k),
        b: cf.p(k - 1).clone(),
        c: -cf.q(k),
        d: cf.q(k - 1).clone(),
    })
}

/// Deterministic `γ_r = (m, i; n, j)` with `γ_r∞ = r`: minimal `|i|`, ties to
/// `i ≥ 0`; minimal `|j|` when `m = 0`.
pub fn matrix_for_cusp(r: &Cusp) -> MatZ {
    let (m, n) = (r.m.clone(), r.n.clone());
    if n.is_zero() {
        return MatZ::identity();
    }
    if m.is_zero() {
        return MatZ::new(0, -1, 1, 0);
    }
    // m·x + n·y = 1, so (m, −y; n, x) has determinant 1
    let (_, x, y) = extended_gcd(&m, &n).expect("cusp is nonzero");
    let am = m.abs();
    let r0 = (-&y).mod_floor(&am);
    let r1 = &r0 - &am;
    let i = if r1.abs() < r0 { r1 } else { r0 };
    let t = (&i + &y) / &m;
    let j = x + t * &n;
    MatZ { a: m, b: i, c: n, d: j }
}

/// Fixed cusp `r`, its matrix `γ_r`, and `b(γ)` with
/// `γ_r⁻¹γγ_r = ±(1, b(γ); 0, 1)`.
pub fn parabolic_data(g: &MatZ) -> Result<(Cusp, MatZ, BigInt)> {
    let MatrixClass::Parabolic(r) = classify(g)? else {
        return Err(Error::WrongClass(format!("{g} is not parabolic")));
    };
    let gr = matrix_for_cusp(&r);
    let mut conj = gr.inverse().mul(g).mul(&gr);
    if conj.a.is_negative() {
        conj = conj.neg();
    }
    debug_assert!(conj.a.is_one() && conj.d.is_one() && conj.c.is_zero());
    Ok((r, gr, conj.b))
}

/// Whether some element of Γ₁(N) maps `c1` to `c2`:
/// `(m₂, n₂) ≡ ±(m₁ + j·n₁, n₁) (mod N)` for some `j`.
pub fn cusp_equivalent(n: u32, c1: &Cusp, c2: &Cusp) -> bool {
    let nn = BigInt::from(n);
    let r = |x: &BigInt| x.mod_floor(&nn);
    let (m1, n1, m2, n2) = (r(&c1.m), r(&c1.n), r(&c2.m), r(&c2.n));
    for s in [1i32, -1] {
        if r(&(&n1 * s)) != n2 {
            continue;
        }
        for j in 0..n {
            if r(&((&m1 + &n1 * j) * s)) == m2 {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    Parabolic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapTerm {
    pub cusp: Cusp,
    pub gamma_r: MatZ,
    pub coeff: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTerm {
    pub gamma: MatZ,
    pub coeff: BigInt,
}

/// A cycle written as a sum of modular caps plus unimodular symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub kind: CycleKind,
    pub source: MatZ,
    pub caps: Vec<CapTerm>,
    pub symbols: Vec<SymbolTerm>,
    pub cf: Option<MinusCF>,
}

impl CycleDecomposition {
    /// Formal boundary `Σ c·(γ∞ − γ0)` of the symbol part.
    pub fn symbol_boundary(&self) -> BTreeMap<Cusp, BigInt> {
        let mut out = BTreeMap::new();
        for s in &self.symbols {
            add_boundary(&mut out, &s.gamma, &s.coeff);
        }
        out.retain(|_, c: &mut BigInt| !c.is_zero());
        out
    }

    pub fn to_json(&self) -> Value {
        let caps: Vec<Value> = self
            .caps
            .iter()
            .map(|c| json!({"cusp": c.cusp.to_string(), "gamma_r": c.gamma_r.to_string(), "coeff": wire::int_value(&c.coeff)}))
            .collect();
        let symbols: Vec<Value> = self
            .symbols
            .iter()
            .map(|s| json!({"gamma": s.gamma.to_string(), "coeff": wire::int_value(&s.coeff)}))
            .collect();
        json!({
            "kind": match self.kind { CycleKind::Parabolic => "parabolic", CycleKind::Hyperbolic => "hyperbolic" },
            "source": self.source.to_string(),
            "caps": caps,
            "symbols": symbols,
            "cf": self.cf.as_ref().map_or(Value::Null, MinusCF::to_json),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = match wire::str_field(v, "kind")? {
            "parabolic" => CycleKind::Parabolic,
            "hyperbolic" => CycleKind::Hyperbolic,
            other => return Err(Error::Parse(format!("unknown cycle kind {other:?}"))),
        };
        let list = |key: &str| -> Result<Vec<Value>> {
            wire::field(v, key)?
                .as_array()
                .cloned()
                .ok_or_else(|| Error::Parse(format!("{key} is not an array")))
        };
        let caps = list("caps")?
            .iter()
            .map(|c| {
                Ok(CapTerm {
                    cusp: wire::str_field(c, "cusp")?.parse()?,
                    gamma_r: wire::str_field(c, "gamma_r")?.parse()?,
                    coeff: wire::value_int(wire::field(c, "coeff")?)?,
                })
            })
            .collect::<Result<_>>()?;
        let symbols = list("symbols")?
            .iter()
            .map(|s| {
                Ok(SymbolTerm {
                    gamma: wire::str_field(s, "gamma")?.parse()?,
                    coeff: wire::value_int(wire::field(s, "coeff")?)?,
                })
            })
            .collect::<Result<_>>()?;
        let cf = match wire::field(v, "cf")? {
            Value::Null => None,
            other => Some(MinusCF::from_json(other)?),
        };
        Ok(CycleDecomposition { kind, source: wire::str_field(v, "source")?.parse()?, caps, symbols, cf })
    }
}

impl Serialize for CycleDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycleDecomposition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CycleDecomposition::from_json(&Value::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_cycle_input(g: &MatZ, n: u32) -> Result<()> {
    if n < 4 {
        return invalid(format!("level {n} must be at least 4"));
    }
    g.require_sl2()?;
    if !g.in_gamma1(n) {
        return Err(Error::NotInGamma1(g.to_string(), n));
    }
    Ok(())
}

/// Splits the cycle of `γ ∈ Γ₁(N)` into caps and unimodular symbols.
///
/// A hyperbolic `γ` is first replaced by `−γ` if needed so that `c > 0`
/// (both give the same cycle); then with `a/c = [b₀, …, b_n]` the caps are
/// `(b₀ − b·q_{n−1} + p_{n−1}·d)·𝒞_∞ + Σ_{k<n} b_{k+1}·𝒞_{γ_k∞}` and the
/// symbols are `Σ_{k≤n} γ_k{0,∞}`.
pub fn decompose_cycle(g: &MatZ, n: u32) -> Result<CycleDecomposition> {
    check_cycle_input(g, n)?;
    match classify(g)? {
        MatrixClass::Identity => invalid("the identity has no cycle decomposition"),
        MatrixClass::Elliptic => Err(Error::WrongClass(format!("{g} is elliptic"))),
        MatrixClass::Parabolic(_) => {
            let (cusp, gamma_r, coeff) = parabolic_data(g)?;
            Ok(CycleDecomposition {
                kind: CycleKind::Parabolic,
                source: g.clone(),
                caps: vec![CapTerm { cusp, gamma_r, coeff }],
                symbols: vec![],
                cf: None,
            })
        }
        MatrixClass::Hyperbolic => {
            assert!(!g.c.is_zero(), "hyperbolic element of Gamma1(N) with c = 0");
            let h = if g.c.is_negative() { g.neg() } else { g.clone() };
            let cf = minus_cf(&h.a, &h.c)?;
            let last = cf.n() as i64;
            let inf_coeff = &cf.b[0] - &h.b * cf.q(last - 1) + cf.p(last - 1) * &h.d;
            let mut caps = vec![CapTerm { cusp: Cusp::infinity(), gamma_r: MatZ::identity(), coeff: inf_coeff }];
            for k in 0..last {
                caps.push(CapTerm {
                    cusp: cf.convergent(k),
                    gamma_r: gamma_k(&cf, k)?,
                    coeff: cf.b[(k + 1) as usize].clone(),
                });
            }
            let symbols = (0..=last)
                .map(|k| Ok(SymbolTerm { gamma: gamma_k(&cf, k)?, coeff: BigInt::one() }))
                .collect::<Result<_>>()?;
            Ok(CycleDecomposition { kind: CycleKind::Hyperbolic, source: g.clone(), caps, symbols, cf: Some(cf) })
        }
    }
}

fn add_boundary(out: &mut BTreeMap<Cusp, BigInt>, g: &MatZ, c: &BigInt) {
    *out.entry(g.act(&Cusp::infinity())).or_insert_with(BigInt::zero) += c;
    *out.entry(g.act(&Cusp::new(0, 1).expect("0"))).or_insert_with(BigInt::zero) -= c;
}

/// The determinant-one matrix taking `0 ↦ from` and `∞ ↦ to`, if the two
/// cusps are adjacent (`det = ±1`).
pub fn unimodular_matrix(from: &Cusp, to: &Cusp) -> Option<MatZ> {
    let delta = &from.m * &to.n - &to.m * &from.n;
    if delta.abs() != BigInt::one() {
        return None;
    }
    let s = -delta;
    Some(MatZ { a: &s * &to.m, b: from.m.clone(), c: &s * &to.n, d: from.n.clone() })
}

/// A formal sum `Σ c·γ{0,∞}` of unimodular symbols.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModularSymbolSum {
    pub terms: Vec<(MatZ, BigInt)>,
}

impl ModularSymbolSum {
    /// Merges terms describing the same geodesic (in either orientation) and
    /// rewrites each as a positive multiple of a canonical matrix.
    pub fn normalized(terms: impl IntoIterator<Item = (MatZ, BigInt)>) -> Self {
        let origin = Cusp::new(0, 1).expect("0");
        let mut by_edge: BTreeMap<(Cusp, Cusp), BigInt> = BTreeMap::new();
        for (g, c) in terms {
            let (x, y) = (g.act(&origin), g.act(&Cusp::infinity()));
            let (key, c) = if x <= y { ((x, y), c) } else { ((y, x), -c) };
            *by_edge.entry(key).or_insert_with(BigInt::zero) += c;
        }
        let terms = by_edge
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((x, y), c)| {
                let (from, to, c) = if c.is_positive() { (x, y, c) } else { (y, x, -c) };
                (unimodular_matrix(&from, &to).expect("unimodular endpoints"), c)
            })
            .collect();
        ModularSymbolSum { terms }
    }

    pub fn boundary(&self) -> BTreeMap<Cusp, BigInt> {
        let mut out = BTreeMap::new();
        for (g, c) in &self.terms {
            add_boundary(&mut out, g, c);
        }
        out.retain(|_, c: &mut BigInt| !c.is_zero());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::normalized(self.terms.iter().chain(&other.terms).cloned())
    }
}

// {∞, r} as Σ γ_k{0,∞} along the convergents of r
fn chain_from_infinity(r: &Cusp) -> Result<Vec<MatZ>> {
    if r.is_infinity() {
        return Ok(vec![]);
    }
    let cf = minus_cf(&r.m, &r.n)?;
    (0..=cf.n() as i64).map(|k| gamma_k(&cf, k)).collect()
}

/// Writes `{r1, r2}` as a sum of unimodular symbols through
/// `{r1, r2} = {∞, r2} − {∞, r1}`.
pub fn reduce_symbol(r1: &Cusp, r2: &Cusp) -> Result<ModularSymbolSum> {
    if r1 == r2 {
        return invalid(format!("symbol {{{r1}, {r2}}} has equal endpoints"));
    }
    let plus = chain_from_infinity(r2)?.into_iter().map(|g| (g, BigInt::one()));
    let minus = chain_from_infinity(r1)?.into_iter().map(|g| (g, -BigInt::one()));
    Ok(ModularSymbolSum::normalized(plus.chain(minus)))
}

/// `σ_a ≡ (a⁻¹, 0; 0, a) (mod N)` in SL₂(Z): `(x, N; (xa−1)/N, a)` with
/// `x = a⁻¹ mod N²`, and `σ_1 = I`.
pub fn hecke_sigma(a: i64, n: u32) -> Result<MatZ> {
    if a == 0 || a.gcd(&(n as i64)) != 1 {
        return invalid(format!("gcd({a}, {n}) must be 1"));
    }
    if a == 1 {
        return Ok(MatZ::identity());
    }
    let nn = BigInt::from(n);
    let a_big = BigInt::from(a);
    let x = mod_inverse(&a_big, &(&nn * &nn)).expect("a is a unit mod N²");
    let z = (&x * &a_big - 1) / &nn;
    Ok(MatZ { a: x, b: nn, c: z, d: a_big })
}

/// Coset representatives `σ_a·(a, b; 0, d)`, `ad = n`, `gcd(a, N) = 1`,
/// `0 ≤ b < d`, ordered by `a` then `b`.
pub fn hecke_reps(n: u64, level: u32) -> Result<Vec<MatZ>> {
    if n == 0 {
        return invalid("Hecke index must be positive");
    }
    let mut out = Vec::new();
    for a in 1..=n {
        if !n.is_multiple_of(a) || a.gcd(&(level as u64)) != 1 {
            continue;
        }
        let d = n / a;
        let sigma = hecke_sigma(a as i64, level)?;
        for b in 0..d {
            out.push(sigma.mul(&MatZ::new(a, b, 0, d)));
        }
    }
    Ok(out)
}

/// `T_n{0,∞}` as a formal sum of unimodular symbols.
pub fn hecke_translate(n: u64, level: u32) -> Result<ModularSymbolSum> {
    let origin = Cusp::new(0, 1).expect("0");
    let mut total = ModularSymbolSum::default();
    for g in hecke_reps(n, level)? {
        let (x, y) = (g.act(&origin), g.act(&Cusp::infinity()));
        if x != y {
            total = total.add(&reduce_symbol(&x, &y)?);
        }
    }
    Ok(total)
}

/// A few fixed elements of Γ₁(N) used to build random test words.
pub fn gamma1_sample_generators(n: u32) -> Vec<MatZ> {
    let n = n as i64;
    vec![
        MatZ::new(1, 1, 0, 1),
        MatZ::new(1, 0, n, 1),
        MatZ::new(1 + n, 1, n, 1),
        MatZ::new(1, -1, n, 1 - n),
        MatZ::new(1 - n, 1, -n, 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_normalization() {
        assert_eq!(Cusp::new(-2, -4).unwrap().to_string(), "1/2");
        assert_eq!(Cusp::new(-3, 0).unwrap(), Cusp::infinity());
        assert_eq!("inf".parse::<Cusp>().unwrap(), Cusp::infinity());
        assert_eq!("-3".parse::<Cusp>().unwrap().to_string(), "-3/1");
        assert!(Cusp::new(0, 0).is_err());
    }

    #[test]
    fn matrix_text() {
        let g: MatZ = "1, 1,4,5".parse().unwrap();
        assert_eq!(g, MatZ::new(1, 1, 4, 5));
        assert_eq!(g.to_string(), "1,1,4,5");
        assert!("1,2,3".parse::<MatZ>().is_err());
    }

    #[test]
    fn unimodular_matrix_endpoints() {
        let from: Cusp = "1/3".parse().unwrap();
        let to: Cusp = "1/2".parse().unwrap();
        let g = unimodular_matrix(&from, &to).unwrap();
        assert!(g.is_sl2());
        assert_eq!(g.act(&Cusp::new(0, 1).unwrap()), from);
        assert_eq!(g.act(&Cusp::infinity()), to);
        assert!(unimodular_matrix(&from, &"2/3".parse().unwrap()).is_none());
    }
}
