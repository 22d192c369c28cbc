//! Exact arithmetic: rationals, the cyclotomic field Q(ζ_N) in canonical
//! power-basis form, Bernoulli polynomials and a few integer helpers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Formats a rational as `num/den`, including the denominator `1`.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// The fractional part `{x} = x − ⌊x⌋`, in `[0, 1)`.
pub fn frac_part(x: &Rat) -> Rat {
    x - x.floor()
}

/// Bernoulli polynomial `B_k(x)` for `k ∈ {1, 2}` and `0 ≤ x < 1`.
///
/// ```
/// use eisenlift::exactcore::{bernoulli, rat};
/// assert_eq!(bernoulli(2, &rat(1, 5)).unwrap(), rat(1, 150));
/// ```
pub fn bernoulli(k: u32, x: &Rat) -> Result<Rat> {
    if x.is_negative() || *x >= Rat::one() {
        return invalid(format!("Bernoulli argument {x} outside [0,1)"));
    }
    match k {
        1 => Ok(x - rat(1, 2)),
        2 => Ok(x * x - x + rat(1, 6)),
        _ => invalid(format!("Bernoulli index {k} not in {{1,2}}")),
    }
}

/// `B_k({x})`: the Bernoulli polynomial at the fractional part of `x`.
pub fn bernoulli_frac(k: u32, x: &Rat) -> Result<Rat> {
    bernoulli(k, &frac_part(x))
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b) > 0`.
///
/// ```
/// use eisenlift::exactcore::extended_gcd;
/// let (g, x, y) = extended_gcd(&2.into(), &5.into()).unwrap();
/// assert_eq!((g, x, y), (1.into(), (-2).into(), 1.into()));
/// ```
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return invalid("extended_gcd(0, 0)");
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        Ok((-r0, -s0, -t0))
    } else {
        Ok((r0, s0, t0))
    }
}

/// Inverse of `a` modulo `m > 1`, in `[0, m)`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = extended_gcd(&a.mod_floor(m), m).ok()?;
    g.is_one().then(|| x.mod_floor(m))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Residue of `x` modulo `n` in `[0, n)`.
pub fn residue(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

pub fn residue_big(x: &BigInt, n: u32) -> u32 {
    let r = x.mod_floor(&BigInt::from(n));
    u32::try_from(&r).expect("residue fits in u32")
}

/// The N-th cyclotomic polynomial, lowest degree coefficient first.
///
/// Computed by exact division of `x^N − 1` by `Φ_d` for every proper divisor
/// `d` of `N`, and cached per level.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    field(n).modulus.clone()
}

fn compute_cyclotomic(n: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &field(d).modulus);
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quo = vec![BigInt::zero(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quo[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quo
}

/// Precomputed data for Q(ζ_N).
#[derive(Debug)]
pub struct CyclotomicField {
    level: u32,
    phi: usize,
    modulus: Vec<BigInt>,
    // canonical coordinates of ζ^j for 0 ≤ j < N, stored sparsely
    zeta: Vec<Vec<(usize, BigInt)>>,
}

impl CyclotomicField {
    fn new(level: u32) -> Self {
        let modulus = if level == 1 {
            vec![BigInt::from(-1), BigInt::one()]
        } else {
            compute_cyclotomic(level)
        };
        let phi = modulus.len() - 1;
        let mut zeta = Vec::with_capacity(level as usize);
        // x^j mod Φ_N, built by repeated multiplication by x
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..level {
            zeta.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect(),
            );
            let top = cur[phi - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            for (i, m) in modulus.iter().take(phi).enumerate() {
                next[i] -= &top * m;
            }
            cur = next;
        }
        CyclotomicField { level, phi, modulus, zeta }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    // reduce a polynomial of any degree; x^k is replaced by ζ^(k mod N)
    fn reduce(&self, poly: Vec<Rat>) -> Vec<Rat> {
        if poly.len() <= self.phi {
            let mut out = poly;
            out.resize(self.phi, Rat::zero());
            return out;
        }
        let mut out: Vec<Rat> = vec![Rat::zero(); self.phi];
        for (k, c) in poly.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                for (i, z) in &self.zeta[k % self.level as usize] {
                    out[*i] += &c * Rat::from_integer(z.clone());
                }
            }
        }
        out
    }
}

static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();

/// The shared field data for level `n`. Concurrent first calls may both
/// compute it; only one result is kept.
pub fn field(n: u32) -> Arc<CyclotomicField> {
    assert!(n >= 1, "cyclotomic level must be positive");
    let map = FIELDS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = map.read().expect("field cache poisoned").get(&n) {
        return f.clone();
    }
    let f = Arc::new(CyclotomicField::new(n));
    map.write()
        .expect("field cache poisoned")
        .entry(n)
        .or_insert(f)
        .clone()
}

/// An element of Q(ζ_N) as coordinates on `1, ζ, …, ζ^(φ(N)−1)`.
#[derive(Clone)]
pub struct CycElem {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rat>,
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.level == other.field.level && self.coeffs == other.coeffs
    }
}

impl Eq for CycElem {}

impl std::hash::Hash for CycElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.level.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem[N={}]({})", self.level(), self)
    }
}

impl CycElem {
    pub fn zero(level: u32) -> Self {
        let field = field(level);
        let coeffs = vec![Rat::zero(); field.phi];
        CycElem { field, coeffs }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rat(level, Rat::one())
    }

    pub fn from_rat(level: u32, r: Rat) -> Self {
        let mut e = Self::zero(level);
        e.coeffs[0] = r;
        e
    }

    /// Builds an element from arbitrary-length polynomial coefficients in ζ.
    pub fn from_poly(level: u32, poly: Vec<Rat>) -> Self {
        let field = field(level);
        let coeffs = field.reduce(poly);
        CycElem { field, coeffs }
    }

    /// Builds an element from canonical coordinates; the length must be φ(N).
    pub fn from_coeffs(level: u32, coeffs: Vec<Rat>) -> Result<Self> {
        let field = field(level);
        if coeffs.len() != field.phi {
            return invalid(format!(
                "expected {} coordinates at level {level}, got {}",
                field.phi,
                coeffs.len()
            ));
        }
        Ok(CycElem { field, coeffs })
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.level() != other.level() {
            return Err(Error::LevelMismatch(self.level(), other.level()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_rational() {
            return other.scale(&self.coeffs[0]);
        }
        if other.is_rational() {
            return self.scale(&other.coeffs[0]);
        }
        let phi = self.field.phi;
        let mut prod = vec![Rat::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycElem { field: self.field.clone(), coeffs: self.field.reduce(prod) }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let coeffs = if r.is_zero() {
            vec![Rat::zero(); self.coeffs.len()]
        } else {
            self.coeffs.iter().map(|c| c * r).collect()
        };
        CycElem { field: self.field.clone(), coeffs }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rat(self.level(), self.coeffs[0].recip()));
        }
        let m: Vec<Rat> = self.field.modulus.iter().map(|c| Rat::from_integer(c.clone())).collect();
        let s = poly_inverse_mod(&self.coeffs, &m);
        Ok(CycElem::from_poly(self.level(), s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// The ordered `num/den` strings of the canonical coordinates.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }

    pub fn from_strings(level: u32, items: &[String]) -> Result<Self> {
        let coeffs = items.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(level, coeffs)
    }
}

impl std::ops::Add for &CycElem {
    type Output = CycElem;
    /// Panics on a level mismatch; use [`CycElem::try_add`] to get an error.
    fn add(self, other: &CycElem) -> CycElem {
        self.try_add(other).expect("level mismatch")
    }
}

impl std::ops::Sub for &CycElem {
    type Output = CycElem;
    fn sub(self, other: &CycElem) -> CycElem {
        self.try_add(&-other).expect("level mismatch")
    }
}

impl std::ops::Mul for &CycElem {
    type Output = CycElem;
    /// Panics on a level mismatch; use [`cyc_mul`] to get an error.
    fn mul(self, other: &CycElem) -> CycElem {
        self.try_mul(other).expect("level mismatch")
    }
}

impl std::ops::Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for CycElem {
    /// Polynomial in `z = ζ_N`, e.g. `1/2 + 1/2*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "{var}")?,
                _ => write!(f, "{mag}*{var}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Product of two elements at the same level, reduced modulo Φ_N.
///
/// ```
/// use eisenlift::exactcore::{cyc_mul, rat, zeta_pow, CycElem};
/// let z = zeta_pow(4, 1);
/// assert_eq!(cyc_mul(&z, &z).unwrap(), CycElem::from_rat(4, rat(-1, 1)));
/// ```
pub fn cyc_mul(a: &CycElem, b: &CycElem) -> Result<CycElem> {
    a.try_mul(b)
}

/// Canonical form of `ζ_N^(e mod N)`.
pub fn zeta_pow(n: u32, e: i64) -> CycElem {
    let field = field(n);
    let j = residue(e, n) as usize;
    let mut coeffs = vec![Rat::zero(); field.phi];
    for (i, z) in &field.zeta[j] {
        coeffs[*i] = Rat::from_integer(z.clone());
    }
    CycElem { field, coeffs }
}

fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (vec![Rat::zero()], r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

// inverse of a modulo the irreducible m, via the extended Euclidean algorithm
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rat::zero()], vec![Rat::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant since m is irreducible and a ≠ 0 mod m
    let c = r0[0].recip();
    s0.iter().map(|x| x * &c).collect()
}
