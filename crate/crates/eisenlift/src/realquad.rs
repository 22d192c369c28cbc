//! Real-quadratic invariants of hyperbolic matrices: discriminant, the
//! fixed-point lattice `Z + νZ` and its binary form, fundamental units of
//! orders via continued fractions, and the primitivity index of `γ ∈ Γ₁(N)`.
//!
//! Units `(t + s√Δ)/2` of norm one correspond to matrices commuting with `γ`
//! through `M(t, s) = ((t − Bs)/2, −Cs; As, (t + Bs)/2)`, where `(A, B, C)` is
//! the primitive form of `γ`; in particular `M(tr γ, content) = γ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::exactcore::{parse_rat, rat_to_string, Rat};
use crate::modsym::{check_cycle_input, classify, MatZ, MatrixClass};
use crate::qseries::QSeries;
use crate::thetalift::lift_cycle;
use crate::wire;

/// `(t + s√D)/2` with integral norm `(t² − s²D)/4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub t: BigInt,
    pub s: BigInt,
    pub disc: BigInt,
}

impl QuadInt {
    pub fn new(t: impl Into<BigInt>, s: impl Into<BigInt>, disc: impl Into<BigInt>) -> Result<Self> {
        let (t, s, disc) = (t.into(), s.into(), disc.into());
        if !(&t * &t - &s * &s * &disc).is_multiple_of(&BigInt::from(4)) {
            return invalid(format!("({t} + {s}*sqrt({disc}))/2 is not integral"));
        }
        Ok(QuadInt { t, s, disc })
    }

    pub fn norm(&self) -> BigInt {
        (&self.t * &self.t - &self.s * &self.s * &self.disc) / 4
    }

    /// Both embeddings positive.
    pub fn is_totally_positive(&self) -> bool {
        self.t.is_positive() && &self.t * &self.t > &self.s * &self.s * &self.disc
    }

    pub fn mul(&self, o: &QuadInt) -> QuadInt {
        assert_eq!(self.disc, o.disc, "discriminant mismatch");
        QuadInt {
            t: (&self.t * &o.t + &self.s * &o.s * &self.disc) / 2,
            s: (&self.t * &o.s + &self.s * &o.t) / 2,
            disc: self.disc.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> QuadInt {
        let mut acc = QuadInt { t: BigInt::from(2), s: BigInt::zero(), disc: self.disc.clone() };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn pair(&self) -> Value {
        json!([wire::int_value(&self.t), wire::int_value(&self.s)])
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/2", self.t, self.s, self.disc)
    }
}

/// `x + y√D` with rational `x, y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadNum {
    pub x: Rat,
    pub y: Rat,
    pub disc: BigInt,
}

impl QuadNum {
    pub fn add(&self, o: &QuadNum) -> QuadNum {
        QuadNum { x: &self.x + &o.x, y: &self.y + &o.y, disc: self.disc.clone() }
    }

    pub fn mul(&self, o: &QuadNum) -> QuadNum {
        let d = Rat::from_integer(self.disc.clone());
        QuadNum {
            x: &self.x * &o.x + &self.y * &o.y * d,
            y: &self.x * &o.y + &self.y * &o.x,
            disc: self.disc.clone(),
        }
    }

    pub fn scale(&self, r: &Rat) -> QuadNum {
        QuadNum { x: &self.x * r, y: &self.y * r, disc: self.disc.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", rat_to_string(&self.x), rat_to_string(&self.y), self.disc)
    }
}

/// Invariants of a hyperbolic `γ ∈ Γ₁(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticData {
    /// `tr(γ)² − 4`.
    pub d: BigInt,
    /// Primitive `(A, B, C) = (c, d − a, −b)/content`.
    pub form: [BigInt; 3],
    /// `B² − 4AC = D/content²`.
    pub delta: BigInt,
    /// `ν = (a − d − √D)/(2c)`, a root of `cx² − (a − d)x − b`.
    pub nu: QuadNum,
    /// Totally positive `(|tr| + content·√Δ)/2`.
    pub eps: QuadInt,
    /// Fundamental totally positive unit of discriminant `Δ`.
    pub eps0: QuadInt,
    /// Least `m` with `±M(ε₀)^m ∈ Γ₁(N)`.
    pub m: u32,
    /// `γ = γ₁^k` with `γ₁` primitive.
    pub k: u32,
    pub primitive: bool,
}

impl QuadraticData {
    pub fn to_json(&self) -> Value {
        json!({
            "D": wire::int_value(&self.d),
            "form": wire::ints_value(&self.form),
            "Delta": wire::int_value(&self.delta),
            "eps": self.eps.pair(),
            "eps0": self.eps0.pair(),
            "m": self.m,
            "k": self.k,
            "primitive": self.primitive,
            "nu": [rat_to_string(&self.nu.x), rat_to_string(&self.nu.y)],
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let d = wire::value_int(wire::field(v, "D")?)?;
        let form: [BigInt; 3] = wire::value_ints(wire::field(v, "form")?)?
            .try_into()
            .map_err(|_| Error::Parse("form must have three entries".into()))?;
        let delta = wire::value_int(wire::field(v, "Delta")?)?;
        let unit = |key: &str| -> Result<QuadInt> {
            let p = wire::value_ints(wire::field(v, key)?)?;
            match p.as_slice() {
                [t, s] => QuadInt::new(t.clone(), s.clone(), delta.clone()),
                _ => Err(Error::Parse(format!("{key} must be a pair"))),
            }
        };
        let small = |key: &str| -> Result<u32> {
            u32::try_from(wire::i64_field(v, key)?).map_err(|_| Error::Parse(format!("bad {key}")))
        };
        let nu = match wire::field(v, "nu")?.as_array().map(Vec::as_slice) {
            Some([Value::String(x), Value::String(y)]) => QuadNum { x: parse_rat(x)?, y: parse_rat(y)?, disc: d.clone() },
            _ => return Err(Error::Parse("nu must be a pair of rationals".into())),
        };
        let primitive = wire::field(v, "primitive")?
            .as_bool()
            .ok_or_else(|| Error::Parse("primitive must be a boolean".into()))?;
        Ok(QuadraticData {
            eps: unit("eps")?,
            eps0: unit("eps0")?,
            m: small("m")?,
            k: small("k")?,
            d,
            form,
            delta,
            nu,
            primitive,
        })
    }
}

impl Serialize for QuadraticData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        QuadraticData::from_json(&Value::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for QuadraticData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "D = {}", self.d)?;
        writeln!(f, "form = ({}, {}, {})", self.form[0], self.form[1], self.form[2])?;
        writeln!(f, "Delta = {}", self.delta)?;
        writeln!(f, "nu = {}", self.nu)?;
        writeln!(f, "eps = {}", self.eps)?;
        writeln!(f, "eps0 = {}", self.eps0)?;
        writeln!(f, "m = {}", self.m)?;
        writeln!(f, "k = {}", self.k)?;
        write!(f, "primitive = {}", self.primitive)
    }
}

fn require_hyperbolic(g: &MatZ, n: u32) -> Result<()> {
    check_cycle_input(g, n)?;
    match classify(g)? {
        MatrixClass::Hyperbolic => Ok(()),
        other => Err(Error::WrongClass(format!("{g} is {other:?}, expected hyperbolic"))),
    }
}

struct Basic {
    d: BigInt,
    form: [BigInt; 3],
    delta: BigInt,
    content: BigInt,
    nu: QuadNum,
}

fn basic(g: &MatZ) -> Result<Basic> {
    let tr = g.trace();
    let d: BigInt = &tr * &tr - 4;
    let raw = [g.c.clone(), &g.d - &g.a, -&g.b];
    let content = raw[0].gcd(&raw[1]).gcd(&raw[2]);
    let form = raw.map(|x| x / &content);
    let delta = &d / (&content * &content);
    if &form[1] * &form[1] - 4 * &form[0] * &form[2] != delta {
        return Err(Error::InvalidArgument(format!("form discriminant mismatch for {g}")));
    }
    let two_c = Rat::from_integer(&g.c * 2);
    let nu = QuadNum {
        x: Rat::from_integer(&g.a - &g.d) / &two_c,
        y: -Rat::one() / &two_c,
        disc: d.clone(),
    };
    // c·ν² − (a − d)·ν − b = 0
    let check = nu
        .mul(&nu)
        .scale(&Rat::from_integer(g.c.clone()))
        .add(&nu.scale(&Rat::from_integer(&g.d - &g.a)))
        .add(&QuadNum { x: Rat::from_integer(-&g.b), y: Rat::zero(), disc: d.clone() });
    if !check.is_zero() {
        return Err(Error::InvalidArgument(format!("nu is not a fixed point of {g}")));
    }
    Ok(Basic { d, form, delta, content, nu })
}

fn check_discriminant(delta: &BigInt) -> Result<()> {
    if !delta.is_positive() {
        return invalid(format!("discriminant {delta} must be positive"));
    }
    let r = delta.mod_floor(&BigInt::from(4));
    if !(r.is_zero() || r.is_one()) {
        return invalid(format!("discriminant {delta} is not 0 or 1 mod 4"));
    }
    let root = delta.sqrt();
    if &root * &root == *delta {
        return invalid(format!("discriminant {delta} is a square"));
    }
    Ok(())
}

/// Fundamental totally positive unit `(t + s√Δ)/2`, `t, s > 0`, of the order
/// of discriminant `Δ`, read off the period of the continued fraction of
/// `(b + √Δ)/2`.
///
/// ```
/// use eisenlift::realquad::fundamental_unit;
/// let e = fundamental_unit(5).unwrap();
/// assert_eq!((e.t, e.s), (3.into(), 1.into()));
/// ```
pub fn fundamental_unit(delta: impl Into<BigInt>) -> Result<QuadInt> {
    let delta = delta.into();
    check_discriminant(&delta)?;
    let root = delta.sqrt();
    let two = BigInt::from(2);
    let b = if (&root - &delta).is_even() { root.clone() } else { &root - 1 };
    let b = if &b * &b == delta { b - 2 } else { b };
    let start = (b.clone(), two.clone());
    let (mut p, mut q) = start.clone();
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let mut len = 0u64;
    loop {
        let a = (&p + &root).div_floor(&q);
        let next = &a * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, next);
        len += 1;
        p = &a * &q - &p;
        q = (&delta - &p * &p) / &q;
        if (p.clone(), q.clone()) == start {
            break;
        }
    }
    let u = q_cur;
    let t = &b * &u + &two * &q_prev;
    let unit = QuadInt::new(t, u, delta)?;
    let unit = if len % 2 == 1 { unit.mul(&unit) } else { unit };
    debug_assert!(unit.norm().is_one());
    Ok(unit)
}

/// Smallest `s ≥ 1` with `Δs² + 4` a square, searching `s ≤ bound`.
pub fn fundamental_unit_bruteforce(delta: i64, bound: u64) -> Option<(u64, u64)> {
    (1..=bound).find_map(|s| {
        let v = delta as u128 * (s as u128) * (s as u128) + 4;
        let t = v.sqrt();
        (t * t == v).then_some((t as u64, s))
    })
}

fn unit_matrix(form: &[BigInt; 3], u: &QuadInt) -> MatZ {
    let [a, b, c] = form;
    MatZ::new((&u.t - b * &u.s) / 2, -(c * &u.s), a * &u.s, (&u.t + b * &u.s) / 2)
}

struct Primitivity {
    gamma1: MatZ,
    k: u32,
    m: u32,
    eps: QuadInt,
    eps0: QuadInt,
}

fn primitivity_data(g: &MatZ, n: u32, b: &Basic) -> Result<Primitivity> {
    let eps0 = fundamental_unit(b.delta.clone())?;
    let eps = QuadInt::new(g.trace().abs(), b.content.clone(), b.delta.clone())?;
    let mut j = 0u32;
    let mut power = QuadInt::new(2, 0, b.delta.clone())?;
    while power.t < eps.t {
        power = power.mul(&eps0);
        j += 1;
    }
    if power != eps {
        return Err(Error::InvalidArgument(format!("{eps} is not a power of {eps0}")));
    }
    let m0 = unit_matrix(&b.form, &eps0);
    let mut m = 0u32;
    let mut mp = MatZ::identity();
    let gamma1 = loop {
        m += 1;
        mp = mp.mul(&m0);
        if mp.in_gamma1(n) {
            break mp;
        }
        if mp.neg().in_gamma1(n) {
            break mp.neg();
        }
    };
    if !j.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!("least power {m} does not divide {j}")));
    }
    let gamma1 = if g.trace().is_negative() { gamma1.inverse() } else { gamma1 };
    let k = j / m;
    if gamma1.pow(k as i64) != *g {
        return Err(Error::InvalidArgument(format!("{gamma1}^{k} does not reproduce {g}")));
    }
    Ok(Primitivity { gamma1, k, m, eps, eps0 })
}

/// Discriminant, form, `ν`, units and primitivity index of a hyperbolic
/// `γ ∈ Γ₁(N)`, each certified by exact arithmetic.
///
/// ```
/// use eisenlift::{realquad::quad_invariants, MatZ};
/// let q = quad_invariants(&MatZ::new(1, 1, 4, 5), 4).unwrap();
/// assert_eq!(q.d, 32.into());
/// assert_eq!(q.k, 1);
/// ```
pub fn quad_invariants(g: &MatZ, n: u32) -> Result<QuadraticData> {
    require_hyperbolic(g, n)?;
    let b = basic(g)?;
    let p = primitivity_data(g, n, &b)?;
    Ok(QuadraticData {
        d: b.d,
        form: b.form,
        delta: b.delta,
        nu: b.nu,
        eps: p.eps,
        eps0: p.eps0,
        m: p.m,
        k: p.k,
        primitive: p.k == 1,
    })
}

/// `(γ₁, k)` with `γ₁ ∈ Γ₁(N)` primitive and `γ = γ₁^k`.
pub fn primitivity(g: &MatZ, n: u32) -> Result<(MatZ, u32)> {
    require_hyperbolic(g, n)?;
    let p = primitivity_data(g, n, &basic(g)?)?;
    Ok((p.gamma1, p.k))
}

/// The lift of the cycle of `γ`, labeled with its quadratic data; the
/// restriction is the lift divided by the primitivity index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalRestriction {
    pub series: QSeries,
    pub restriction: QSeries,
    pub data: QuadraticData,
    pub k: u32,
}

pub fn diagonal_restriction(g: &MatZ, n: u32, prec: i64) -> Result<DiagonalRestriction> {
    let data = quad_invariants(g, n)?;
    let series = lift_cycle(g, n, prec)?;
    let restriction = series.scale_rat(&Rat::new(BigInt::one(), BigInt::from(data.k)));
    Ok(DiagonalRestriction { k: data.k, series, restriction, data })
}
