//! q-expansions of the level-N Eisenstein series `E^(k)_{p,q}`, the
//! regularized `E^(2)_{0,0}`, their finite Fourier transforms `Ê^(k)_{a,b}`,
//! the level-raised `G^(k)_r`, `Ĝ^(2)_p`, the holomorphic combination
//! `H^(2)_{p,q}`, and logarithmic derivatives of Siegel units.
//!
//! Every `prec` argument counts integral powers of `q`: the returned series
//! is exact for all exponents `< prec` and has precision numerator `N·prec`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::exactcore::{bernoulli, rat, zeta_pow, CycElem, Rat};
use crate::qseries::QSeries;

/// Which series, with indices reduced modulo the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesTag {
    E { k: u32, p: u32, q: u32 },
    E2_00,
    Ehat { k: u32, a: u32, b: u32 },
    G { k: u32, r: u32 },
    Ghat2 { p: u32 },
    H { p: u32, q: u32 },
    SiegelLogDeriv { a: u32, b: u32 },
}

/// A validated series identifier. The forbidden index combinations cannot be
/// constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisensteinId {
    level: u32,
    tag: SeriesTag,
}

fn check_level(n: u32) -> Result<()> {
    if n == 0 {
        return invalid("level must be positive");
    }
    Ok(())
}

fn check_weight(k: u32) -> Result<()> {
    if k != 1 && k != 2 {
        return invalid(format!("weight {k} not in {{1,2}}"));
    }
    Ok(())
}

fn red(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

impl EisensteinId {
    pub fn e(k: u32, p: i64, q: i64, n: u32) -> Result<Self> {
        check_level(n)?;
        check_weight(k)?;
        let (p, q) = (red(p, n), red(q, n));
        if p == 0 && q == 0 {
            return invalid("E_{p,q} needs (p,q) not congruent to (0,0); use E2_00");
        }
        Ok(Self { level: n, tag: SeriesTag::E { k, p, q } })
    }

    pub fn e2_00(n: u32) -> Result<Self> {
        check_level(n)?;
        Ok(Self { level: n, tag: SeriesTag::E2_00 })
    }

    pub fn ehat(k: u32, a: i64, b: i64, n: u32) -> Result<Self> {
        check_level(n)?;
        check_weight(k)?;
        Ok(Self { level: n, tag: SeriesTag::Ehat { k, a: red(a, n), b: red(b, n) } })
    }

    pub fn g(k: u32, r: i64, n: u32) -> Result<Self> {
        check_level(n)?;
        check_weight(k)?;
        Ok(Self { level: n, tag: SeriesTag::G { k, r: red(r, n) } })
    }

    pub fn ghat2(p: i64, n: u32) -> Result<Self> {
        check_level(n)?;
        Ok(Self { level: n, tag: SeriesTag::Ghat2 { p: red(p, n) } })
    }

    pub fn h(p: i64, q: i64, n: u32) -> Result<Self> {
        check_level(n)?;
        Ok(Self { level: n, tag: SeriesTag::H { p: red(p, n), q: red(q, n) } })
    }

    pub fn siegel(a: i64, b: i64, n: u32) -> Result<Self> {
        check_level(n)?;
        let (a, b) = (red(a, n), red(b, n));
        if a == 0 && b == 0 {
            return invalid("Siegel unit g_{a,b} needs (a,b) not congruent to (0,0)");
        }
        Ok(Self { level: n, tag: SeriesTag::SiegelLogDeriv { a, b } })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn tag(&self) -> SeriesTag {
        self.tag
    }

    /// Computes the expansion up to `q^prec` (exclusive).
    pub fn expand(&self, prec: i64) -> Result<QSeries> {
        if prec < 1 {
            return invalid(format!("precision {prec} must be at least 1"));
        }
        let n = self.level;
        let bound = n as i64 * prec;
        Ok(match self.tag {
            SeriesTag::E { k, p, q } => e_series(k, p, q, n, bound),
            SeriesTag::E2_00 => e2_00_series(n, bound),
            SeriesTag::Ehat { k, a, b } => ehat_series(k, a, b, n, bound),
            SeriesTag::G { k, r } => g_series(k, r, n, prec),
            SeriesTag::Ghat2 { p } => ehat_series(2, p, 0, n, prec).substitute_q_power(n as i64),
            SeriesTag::H { p, q } => {
                if q != 0 {
                    g_series(2, q, n, prec)
                } else {
                    let g0 = g_series(2, 0, n, prec);
                    let gh = ehat_series(2, p, 0, n, prec).substitute_q_power(n as i64);
                    g0.sub(&gh)?
                }
            }
            SeriesTag::SiegelLogDeriv { a, b } => siegel_series(a, b, n, bound),
        })
    }
}

impl fmt::Display for EisensteinId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.level;
        match self.tag {
            SeriesTag::E { k, p, q } => write!(f, "N={n}:E(k={k},p={p},q={q})"),
            SeriesTag::E2_00 => write!(f, "N={n}:E2_00"),
            SeriesTag::Ehat { k, a, b } => write!(f, "N={n}:Ehat(k={k},a={a},b={b})"),
            SeriesTag::G { k, r } => write!(f, "N={n}:G(k={k},r={r})"),
            SeriesTag::Ghat2 { p } => write!(f, "N={n}:Ghat2(p={p})"),
            SeriesTag::H { p, q } => write!(f, "N={n}:H(p={p},q={q})"),
            SeriesTag::SiegelLogDeriv { a, b } => write!(f, "N={n}:SiegelLogDeriv(a={a},b={b})"),
        }
    }
}

// Accumulates coefficients in the redundant basis 1, ζ, …, ζ^(N−1), where
// multiplication by a power of ζ is a rotation; reduced once at the end.
struct Accumulator {
    level: u32,
    bound: i64,
    map: BTreeMap<i64, Vec<Rat>>,
}

impl Accumulator {
    fn new(level: u32, bound: i64) -> Self {
        Accumulator { level, bound, map: BTreeMap::new() }
    }

    fn add(&mut self, e: i64, c: &Rat, j: u32) {
        if e >= self.bound || c.is_zero() {
            return;
        }
        let n = self.level as usize;
        let slot = self.map.entry(e).or_insert_with(|| vec![Rat::zero(); n]);
        slot[j as usize % n] += c;
    }

    fn add_elem(&mut self, e: i64, c: &CycElem, shift: u32) {
        for (i, x) in c.coeffs().iter().enumerate() {
            self.add(e, x, i as u32 + shift);
        }
    }

    fn finish(self) -> QSeries {
        let level = self.level;
        QSeries::from_terms(
            level,
            self.bound,
            self.map.into_iter().map(|(e, v)| (e, CycElem::from_poly(level, v))),
        )
        .expect("accumulated terms are in range")
    }
}

/// Constant term `a₀(E^(k)_{p,q})` for `(p,q) ≢ (0,0)`.
pub fn e_constant(k: u32, p: u32, q: u32, n: u32) -> CycElem {
    let x = rat(p as i64, n as i64);
    match (k, p) {
        (1, 0) => {
            let z = zeta_pow(n, q as i64);
            let one = CycElem::one(n);
            let num = (&one + &z).scale(&rat(1, 2));
            num.try_div(&(&one - &z)).expect("1 − ζ^q is nonzero for q ≢ 0")
        }
        (1, _) => CycElem::from_rat(n, -bernoulli(1, &x).expect("0 ≤ p/N < 1")),
        _ => CycElem::from_rat(n, -bernoulli(2, &x).expect("0 ≤ p/N < 1") / Rat::from_integer(2.into())),
    }
}

// The non-constant terms of E^(k)_{u,v}: calls sink(e, c, j) for each
// contribution c·ζ^j·q^(e/N) with e < bound.
fn e_terms(k: u32, u: u32, v: u32, n: u32, bound: i64, mut sink: impl FnMut(i64, &Rat, u32)) {
    let nn = n as i64;
    let neg_u = (n - u) % n;
    for t in 1..bound {
        let res = (t % nn) as u32;
        if res != u && res != neg_u {
            continue;
        }
        let base = if k == 1 { Rat::from_integer(1.into()) } else { rat(t, nn) };
        // (−1)^k on the n ≡ −u sum
        let reflected = if k == 1 { -base.clone() } else { base.clone() };
        let mut m = 1i64;
        while m * t < bound {
            let mv = (m % nn) as u32 * v % n;
            if res == u {
                sink(m * t, &base, mv);
            }
            if res == neg_u {
                sink(m * t, &reflected, (n - mv) % n);
            }
            m += 1;
        }
    }
}

pub(crate) fn e_series(k: u32, p: u32, q: u32, n: u32, bound: i64) -> QSeries {
    let mut acc = Accumulator::new(n, bound);
    acc.add_elem(0, &e_constant(k, p, q, n), 0);
    e_terms(k, p, q, n, bound, |e, c, j| acc.add(e, c, j));
    acc.finish()
}

fn sigma1(m: i64) -> i64 {
    (1..=m).filter(|d| m % d == 0).sum()
}

pub(crate) fn e2_00_series(n: u32, bound: i64) -> QSeries {
    let nn = n as i64;
    let mut terms = vec![(0, rat(-1, 12))];
    let mut m = 1;
    while m * nn < bound {
        terms.push((m * nn, Rat::from_integer((2 * sigma1(m)).into())));
        m += 1;
    }
    QSeries::from_rat_terms(n, bound, terms).expect("terms in range")
}

pub(crate) fn ehat_series(k: u32, a: u32, b: u32, n: u32, bound: i64) -> QSeries {
    let mut acc = Accumulator::new(n, bound);
    for u in 0..n {
        for v in 0..n {
            let w = ((b as u64 * u as u64 + (n - a) as u64 * v as u64) % n as u64) as u32;
            if u == 0 && v == 0 {
                if k == 2 {
                    for (e, c) in e2_00_series(n, bound).terms() {
                        acc.add(e, c.as_rational().expect("rational"), 0);
                    }
                }
                continue;
            }
            acc.add_elem(0, &e_constant(k, u, v, n), w);
            e_terms(k, u, v, n, bound, |e, c, j| acc.add(e, c, j + w));
        }
    }
    let series = acc.finish();
    if k == 1 {
        series.scale_rat(&rat(1, n as i64))
    } else {
        series
    }
}

fn g_series(k: u32, r: u32, n: u32, prec: i64) -> QSeries {
    let nn = n as i64;
    match (k, r) {
        (1, 0) => QSeries::zero(n, nn * prec),
        (2, 0) => e2_00_series(n, prec).substitute_q_power(nn),
        _ => e_series(k, r, 0, n, prec).substitute_q_power(nn),
    }
}

fn siegel_series(a: u32, b: u32, n: u32, bound: i64) -> QSeries {
    let nn = n as i64;
    let mut acc = Accumulator::new(n, bound);
    // log(1 − ζ^c q^(s/N)) = −Σ_m ζ^(cm) q^(sm/N) / m
    let mut factor = |s: i64, c: u32| {
        let mut m = 1i64;
        while s * m < bound {
            let j = ((m % nn) as u64 * c as u64 % n as u64) as u32;
            acc.add(s * m, &rat(-1, m), j);
            m += 1;
        }
    };
    let mut t = 0i64;
    while t * nn + (a as i64) < bound {
        let s = t * nn + a as i64;
        if s > 0 {
            factor(s, b);
        }
        t += 1;
    }
    let mut t = 1i64;
    while t * nn - (a as i64) < bound {
        factor(t * nn - a as i64, (n - b) % n);
        t += 1;
    }
    let log = acc.finish();
    let b2 = bernoulli(2, &rat(a as i64, nn)).expect("0 ≤ a/N < 1");
    let c = QSeries::constant(CycElem::from_rat(n, b2 / Rat::from_integer(2.into())), bound);
    log.q_ddq().add(&c).expect("same level")
}

/// `E^(k)_{p,q}` up to `q^prec`.
///
/// ```
/// use eisenlift::eisenstein::expand_e;
/// use eisenlift::exactcore::{rat, CycElem};
/// let e = expand_e(1, 1, 0, 5, 2).unwrap();
/// assert_eq!(e.constant_term(), CycElem::from_rat(5, rat(3, 10)));
/// ```
pub fn expand_e(k: u32, p: i64, q: i64, n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::e(k, p, q, n)?.expand(prec)
}

/// The regularized `E^(2)_{0,0} = −1/12 + 2Σσ₁(m)q^m`.
pub fn expand_e2_00(n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::e2_00(n)?.expand(prec)
}

/// `G^(k)_r(τ) = E^(k)_{r,0}(Nτ)`; zero for `k = 1, r ≡ 0`.
pub fn expand_g(k: u32, r: i64, n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::g(k, r, n)?.expand(prec)
}

/// `Ê^(k)_{a,b} = N^(k−2) Σ_{u,v mod N} ζ^(bu−av) E^(k)_{u,v}`.
pub fn expand_ehat(k: u32, a: i64, b: i64, n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::ehat(k, a, b, n)?.expand(prec)
}

/// `Ĝ^(2)_p(τ) = Ê^(2)_{p,0}(Nτ)`.
pub fn expand_ghat2(p: i64, n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::ghat2(p, n)?.expand(prec)
}

/// `H^(2)_{p,q} = G^(2)_q − δ_{q≡0}·Ĝ^(2)_p`.
pub fn expand_h(p: i64, q: i64, n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::h(p, q, n)?.expand(prec)
}

/// `q·d/dq log g_{a,b}` from the product formula of the Siegel unit.
pub fn siegel_log_deriv(a: i64, b: i64, n: u32, prec: i64) -> Result<QSeries> {
    EisensteinId::siegel(a, b, n)?.expand(prec)
}

// (i, j, N, prec) of a G(1)_i G(1)_j product
type ProductKey = (u32, u32, u32, i64);

/// Memoizes expansions by `(id, prec)`, optionally persisting each one as a
/// JSON document named by the SHA-256 of its key.
#[derive(Debug, Default)]
pub struct SeriesCache {
    mem: RwLock<HashMap<(EisensteinId, i64), Arc<QSeries>>>,
    products: RwLock<HashMap<ProductKey, Arc<QSeries>>>,
    dir: Option<PathBuf>,
}

impl SeriesCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// A cache that also reads and writes `dir`, creating it if needed.
    pub fn with_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(SeriesCache { dir: Some(dir), ..Self::default() })
    }

    /// The process-wide in-memory cache used by the free functions.
    pub fn global() -> &'static SeriesCache {
        static GLOBAL: OnceLock<SeriesCache> = OnceLock::new();
        GLOBAL.get_or_init(SeriesCache::in_memory)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// File name for `(id, prec)`: hex SHA-256 of the key, plus `.json`.
    pub fn file_name(id: &EisensteinId, prec: i64) -> String {
        let digest = Sha256::digest(format!("{id}|prec={prec}").as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        format!("{hex}.json")
    }

    pub fn get(&self, id: &EisensteinId, prec: i64) -> Result<Arc<QSeries>> {
        let key = (*id, prec);
        if let Some(s) = self.mem.read().expect("cache poisoned").get(&key) {
            return Ok(s.clone());
        }
        let series = match self.load(id, prec)? {
            Some(s) => s,
            None => {
                let s = id.expand(prec)?;
                self.store(id, prec, &s)?;
                s
            }
        };
        let mut map = self.mem.write().expect("cache poisoned");
        Ok(map.entry(key).or_insert_with(|| Arc::new(series)).clone())
    }

    /// `G^(1)_i · G^(1)_j`, memoized on the unordered residue pair.
    pub fn g1_product(&self, i: i64, j: i64, n: u32, prec: i64) -> Result<Arc<QSeries>> {
        let (i, j) = (red(i, n), red(j, n));
        let key = (n, i.min(j), i.max(j), prec);
        if let Some(s) = self.products.read().expect("cache poisoned").get(&key) {
            return Ok(s.clone());
        }
        let a = self.get(&EisensteinId::g(1, i as i64, n)?, prec)?;
        let b = self.get(&EisensteinId::g(1, j as i64, n)?, prec)?;
        let p = a.mul(&b)?.truncate(n as i64 * prec);
        let mut map = self.products.write().expect("cache poisoned");
        Ok(map.entry(key).or_insert_with(|| Arc::new(p)).clone())
    }

    fn load(&self, id: &EisensteinId, prec: i64) -> Result<Option<QSeries>> {
        let Some(dir) = &self.dir else { return Ok(None) };
        let path = dir.join(Self::file_name(id, prec));
        let Ok(text) = fs::read_to_string(&path) else { return Ok(None) };
        match serde_json::from_str::<QSeries>(&text) {
            Ok(s) if s.level() == id.level() && s.prec() == id.level() as i64 * prec => Ok(Some(s)),
            // unreadable or foreign content is recomputed and overwritten
            _ => Ok(None),
        }
    }

    fn store(&self, id: &EisensteinId, prec: i64, s: &QSeries) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(Self::file_name(id, prec));
        let text = serde_json::to_string(s).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = tempfile_path(dir);
        fs::write(&tmp, text.as_bytes()).map_err(|e| Error::Cache(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Ok(())
    }
}

fn tempfile_path(dir: &Path) -> PathBuf {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let k = COUNTER.fetch_add(1, Ordering::Relaxed);
    dir.join(format!(".tmp-{}-{k}", std::process::id()))
}
