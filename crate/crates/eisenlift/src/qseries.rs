//! Truncated q-expansions in powers of `q^(1/N)` with coefficients in Q(ζ_N).
//!
//! A series stores exponent numerators `e` (the term is `c·q^(e/N)`) and a
//! precision numerator `P`: every coefficient with `e < P` is exact, nothing
//! is known beyond.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::exactcore::{rat, CycElem, Rat};
use crate::wire;

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    level: u32,
    prec: i64,
    terms: BTreeMap<i64, CycElem>,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[N={}, prec={}]({})", self.level, self.prec, self)
    }
}

impl QSeries {
    pub fn zero(level: u32, prec: i64) -> Self {
        assert!(prec > 0, "precision must be positive");
        QSeries { level, prec, terms: BTreeMap::new() }
    }

    pub fn constant(c: CycElem, prec: i64) -> Self {
        Self::monomial(0, c, prec)
    }

    pub fn one(level: u32, prec: i64) -> Self {
        Self::constant(CycElem::one(level), prec)
    }

    /// `c·q^(e/N)`, or zero if `e ≥ prec`.
    pub fn monomial(e: i64, c: CycElem, prec: i64) -> Self {
        assert!(e >= 0, "negative exponent");
        let mut s = Self::zero(c.level(), prec);
        if e < prec && !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    /// Builds a series from `(e, c)` pairs; repeated exponents are summed and
    /// terms at or beyond `prec` dropped.
    pub fn from_terms(
        level: u32,
        prec: i64,
        terms: impl IntoIterator<Item = (i64, CycElem)>,
    ) -> Result<Self> {
        if prec <= 0 {
            return invalid(format!("precision {prec} must be positive"));
        }
        let mut s = Self::zero(level, prec);
        for (e, c) in terms {
            if e < 0 {
                return invalid(format!("negative exponent numerator {e}"));
            }
            if c.level() != level {
                return Err(Error::LevelMismatch(level, c.level()));
            }
            if e < prec {
                s.add_term(e, &c);
            }
        }
        Ok(s)
    }

    pub fn from_rat_terms(
        level: u32,
        prec: i64,
        terms: impl IntoIterator<Item = (i64, Rat)>,
    ) -> Result<Self> {
        Self::from_terms(level, prec, terms.into_iter().map(|(e, r)| (e, CycElem::from_rat(level, r))))
    }

    pub(crate) fn add_term(&mut self, e: i64, c: &CycElem) {
        if e >= self.prec || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                old.add_assign_unchecked(c);
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Stored `(e, c)` pairs in increasing exponent order; all `c` nonzero.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycElem)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `q^(e/N)`; errors if `e` is beyond the precision.
    pub fn coeff(&self, e: i64) -> Result<CycElem> {
        if e < 0 || e >= self.prec {
            return invalid(format!("exponent numerator {e} outside [0, {})", self.prec));
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(|| CycElem::zero(self.level)))
    }

    /// Coefficient of the integral power `q^n`.
    pub fn coeff_q(&self, n: i64) -> Result<CycElem> {
        self.coeff(n * self.level as i64)
    }

    pub fn constant_term(&self) -> CycElem {
        self.coeff(0).expect("precision is positive")
    }

    /// Smallest stored exponent numerator, 0 for the zero series.
    pub fn valuation(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(CycElem::is_rational)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        let mut out = self.truncate(prec);
        for (e, c) in other.terms.range(..prec) {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &CycElem) -> Result<Self> {
        if c.level() != self.level {
            return Err(Error::LevelMismatch(self.level, c.level()));
        }
        Ok(self.map_coeffs(|x| x * c))
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.map_coeffs(|x| x.scale(r))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale_rat(&Rat::from_integer(k.into()))
    }

    fn map_coeffs(&self, f: impl Fn(&CycElem) -> CycElem) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        QSeries { level: self.level, prec: self.prec, terms }
    }

    /// Cauchy product with precision `min(P_a + val_b, P_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = (self.prec + other.valuation()).min(other.prec + self.valuation());
        let mut acc: BTreeMap<i64, CycElem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in other.terms.range(..prec - ea) {
                let c = ca * cb;
                match acc.get_mut(&(ea + eb)) {
                    Some(old) => old.add_assign_unchecked(&c),
                    None => {
                        acc.insert(ea + eb, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(QSeries { level: self.level, prec, terms: acc })
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.terms.get(&0).ok_or(Error::DivisionByZero)?;
        let inv0 = a0.inv()?;
        let mut out = Self::zero(self.level, self.prec);
        let mut dense: Vec<CycElem> = Vec::with_capacity(self.prec as usize);
        dense.push(inv0.clone());
        for e in 1..self.prec {
            let mut s = CycElem::zero(self.level);
            for (j, aj) in self.terms.range(1..=e) {
                let b = &dense[(e - j) as usize];
                if !b.is_zero() {
                    s.add_assign_unchecked(&(aj * b));
                }
            }
            dense.push(-&(&s * &inv0));
        }
        for (e, c) in dense.into_iter().enumerate() {
            out.add_term(e as i64, &c);
        }
        Ok(out)
    }

    /// `q·d/dq`: each `c·q^(e/N)` becomes `(e/N)·c·q^(e/N)`.
    pub fn q_ddq(&self) -> Self {
        let n = self.level as i64;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| **e != 0)
            .map(|(e, c)| (*e, c.scale(&rat(*e, n))))
            .collect();
        QSeries { level: self.level, prec: self.prec, terms }
    }

    /// Drops everything at or beyond `prec` (which must not exceed the
    /// current precision).
    pub fn truncate(&self, prec: i64) -> Self {
        assert!(prec > 0 && prec <= self.prec, "cannot truncate to {prec}");
        let terms = self.terms.range(..prec).map(|(e, c)| (*e, c.clone())).collect();
        QSeries { level: self.level, prec, terms }
    }

    /// Substitutes `q ↦ q^k`: exponent numerators and precision scale by `k`.
    /// With `k = N` this is the level raising `f(τ) ↦ f(Nτ)`.
    pub fn substitute_q_power(&self, k: i64) -> Self {
        assert!(k > 0, "substitution power must be positive");
        let terms = self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect();
        QSeries { level: self.level, prec: self.prec * k, terms }
    }

    /// First exponent below the common precision where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, CycElem, CycElem)> {
        let prec = self.prec.min(other.prec);
        let zero = CycElem::zero(self.level);
        let keys: std::collections::BTreeSet<i64> = self
            .terms
            .range(..prec)
            .chain(other.terms.range(..prec))
            .map(|(e, _)| *e)
            .collect();
        for e in keys {
            let a = self.terms.get(&e).unwrap_or(&zero);
            let b = other.terms.get(&e).unwrap_or(&zero);
            if a != b {
                return Some((e, a.clone(), b.clone()));
            }
        }
        None
    }

    /// Equality up to the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.level == other.level && self.first_mismatch(other).is_none()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"e": e, "c": c.to_strings()}))
            .collect();
        json!({"N": self.level, "prec": self.prec, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let level = u32::try_from(wire::i64_field(v, "N")?)
            .map_err(|_| Error::Parse("level out of range".into()))?;
        if level == 0 {
            return Err(Error::Parse("level must be positive".into()));
        }
        let prec = wire::i64_field(v, "prec")?;
        let items = wire::field(v, "terms")?
            .as_array()
            .ok_or_else(|| Error::Parse("terms is not an array".into()))?;
        let mut terms = Vec::with_capacity(items.len());
        let mut last = -1;
        for t in items {
            let e = wire::i64_field(t, "e")?;
            if e <= last {
                return Err(Error::Parse("terms not strictly increasing".into()));
            }
            last = e;
            let strs: Vec<String> = serde_json::from_value(wire::field(t, "c")?.clone())
                .map_err(|err| Error::Parse(err.to_string()))?;
            let c = CycElem::from_strings(level, &strs)?;
            if c.is_zero() {
                return Err(Error::Parse(format!("stored zero coefficient at e={e}")));
            }
            if e >= prec {
                return Err(Error::Parse(format!("term e={e} beyond precision {prec}")));
            }
            terms.push((e, c));
        }
        Self::from_terms(level, prec, terms)
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        QSeries::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn power_text(e: i64, n: i64) -> String {
    let g = e.gcd(&n);
    let (a, b) = (e / g, n / g);
    match (a, b) {
        (0, _) => String::new(),
        (1, 1) => "q".into(),
        (_, 1) => format!("q^{a}"),
        _ => format!("q^({a}/{b})"),
    }
}

impl fmt::Display for QSeries {
    /// Text form such as `3/10 + q + q^2 - 1/5*q^(3/5)`; zero terms are
    /// omitted and the precision is not shown.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let pw = power_text(*e, self.level as i64);
            let (neg, body) = match c.as_rational() {
                Some(r) => {
                    let mag = r.abs();
                    let body = match (pw.is_empty(), mag.is_one()) {
                        (true, _) => mag.to_string(),
                        (false, true) => pw.clone(),
                        (false, false) => format!("{mag}*{pw}"),
                    };
                    (r.is_negative(), body)
                }
                None if pw.is_empty() => (false, format!("({c})")),
                None => (false, format!("({c})*{pw}")),
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
