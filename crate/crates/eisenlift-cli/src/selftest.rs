use eisenlift::eisenstein::{expand_e, expand_ehat, expand_g, siegel_log_deriv};
use eisenlift::modsym::{gamma1_sample_generators, hecke_sigma, minus_cf};
use eisenlift::realquad::{fundamental_unit, fundamental_unit_bruteforce};
use eisenlift::thetalift::{boundary_zero, lift_cycle, verify_all_triangles, verify_polygon};
use eisenlift::{Cusp, MatZ};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

type CheckFn = fn(i64) -> Result<String, String>;

const CHECKS: [(&str, CheckFn); 10] = [
    ("expansion", expansion),
    ("triangles", triangles),
    ("polygon", polygon),
    ("additivity", additivity),
    ("inverse", inverse),
    ("siegel", siegel),
    ("functional-equation", functional_equation),
    ("continued-fraction", continued_fraction),
    ("hecke", hecke),
    ("pell", pell),
];

/// Runs every check on its own thread; results keep the declaration order.
pub fn run(prec: i64) -> Vec<Check> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS.iter().map(|&(name, f)| (name, s.spawn(move || f(prec)))).collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let r = h.join().unwrap_or_else(|_| Err("panicked".into()));
                match r {
                    Ok(detail) => Check { name, passed: true, detail },
                    Err(detail) => Check { name, passed: false, detail },
                }
            })
            .collect()
    })
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn words(n: u32) -> Vec<MatZ> {
    let gens = gamma1_sample_generators(n);
    let mut out = gens.clone();
    for a in &gens {
        for b in &gens {
            out.push(a.mul(&b.inverse()));
        }
    }
    out
}

fn expansion(_: i64) -> Result<String, String> {
    let s = expand_g(1, 1, 5, 5).map_err(err)?.to_string();
    if s != "3/10 + q + q^2 + q^3" {
        return Err(format!("G(1)_1 at N=5 is {s}"));
    }
    Ok(s)
}

fn triangles(prec: i64) -> Result<String, String> {
    let mut count = 0;
    for n in [5, 7, 9] {
        for r in verify_all_triangles(n, prec) {
            if !r.is_verified() {
                return Err(r.to_string());
            }
            count += 1;
        }
    }
    Ok(format!("{count} triangles at N=5,7,9"))
}

fn polygon(prec: i64) -> Result<String, String> {
    let v: Vec<Cusp> = ["1/2", "0/1", "1/3", "2/5"].iter().map(|c| c.parse().unwrap()).collect();
    for r in [verify_polygon(7, &v, prec), boundary_zero(7, &v, prec)] {
        if !r.is_verified() {
            return Err(r.to_string());
        }
    }
    Ok("quadrilateral at N=7".into())
}

fn additivity(prec: i64) -> Result<String, String> {
    let mut count = 0;
    for n in [4, 5, 6, 7] {
        let ws = words(n);
        for (g, d) in ws.iter().zip(ws.iter().rev()).take(8) {
            let lhs = lift_cycle(&g.mul(d), n, prec).map_err(err)?;
            let rhs = lift_cycle(g, n, prec).map_err(err)?.add(&lift_cycle(d, n, prec).map_err(err)?).map_err(err)?;
            if lhs != rhs {
                return Err(format!("N={n} {g} * {d}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} products"))
}

fn inverse(prec: i64) -> Result<String, String> {
    let mut count = 0;
    for n in [4, 5, 6, 7] {
        for g in words(n).iter().take(10) {
            let l = lift_cycle(g, n, prec).map_err(err)?;
            if lift_cycle(&g.inverse(), n, prec).map_err(err)? != l.neg() {
                return Err(format!("N={n} {g}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} inverses"))
}

fn siegel(prec: i64) -> Result<String, String> {
    for p in 0..5 {
        for q in 0..5 {
            if p == 0 && q == 0 {
                continue;
            }
            let s = expand_e(2, p, q, 5, prec).map_err(err)?.add(&siegel_log_deriv(p, q, 5, prec).map_err(err)?).map_err(err)?;
            if !s.is_zero() {
                return Err(format!("({p},{q}) at N=5"));
            }
        }
    }
    Ok("24 pairs at N=5".into())
}

fn functional_equation(prec: i64) -> Result<String, String> {
    for n in 1..=6u32 {
        for p in 0..n as i64 {
            for q in 0..n as i64 {
                if (p, q) != (0, 0) && expand_ehat(1, p, q, n, prec).map_err(err)? != expand_e(1, p, q, n, prec).map_err(err)? {
                    return Err(format!("({p},{q}) at N={n}"));
                }
            }
        }
    }
    Ok("weight 1, N<=6".into())
}

fn continued_fraction(_: i64) -> Result<String, String> {
    let b = |a: i64, c: i64| -> Result<Vec<BigInt>, String> { Ok(minus_cf(&a.into(), &c.into()).map_err(err)?.b().to_vec()) };
    if b(7, 3)? != [3, 2, 2].map(BigInt::from) || b(1, 4)? != [1, 2, 2, 2].map(BigInt::from) {
        return Err("reference expansions".into());
    }
    Ok("7/3 and 1/4".into())
}

fn hecke(_: i64) -> Result<String, String> {
    let s = hecke_sigma(2, 5).map_err(err)?;
    if s != MatZ::new(13, 5, 5, 2) {
        return Err(format!("sigma_2 at N=5 is {s}"));
    }
    Ok(format!("sigma_2 = {s}"))
}

fn pell(_: i64) -> Result<String, String> {
    let mut count = 0;
    for d in 5..=100i64 {
        if !(d % 4 == 0 || d % 4 == 1) || (d as f64).sqrt().fract() == 0.0 {
            continue;
        }
        let e = fundamental_unit(d).map_err(err)?;
        if let Some((t, s)) = fundamental_unit_bruteforce(d, 100_000) {
            if (e.t.clone(), e.s.clone()) != (BigInt::from(t), BigInt::from(s)) {
                return Err(format!("discriminant {d}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} discriminants <= 100"))
}
