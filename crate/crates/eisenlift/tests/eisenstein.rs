use eisenlift::eisenstein::*;
use eisenlift::exactcore::{bernoulli_frac, rat, zeta_pow, CycElem, Rat};
use eisenlift::QSeries;
use num_bigint::BigInt;

fn q_rat(s: &QSeries, n: i64) -> Rat {
    s.coeff_q(n).unwrap().as_rational().cloned().expect("rational coefficient")
}

fn sigma1(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

#[test]
fn e_examples() {
    let e = expand_e(1, 1, 0, 5, 6).unwrap();
    assert_eq!(e.constant_term(), CycElem::from_rat(5, rat(3, 10)));
    assert_eq!(e.coeff(1).unwrap(), CycElem::one(5));

    let e = expand_e(1, 0, 1, 4, 2).unwrap();
    assert_eq!(e.constant_term(), zeta_pow(4, 1).scale(&rat(1, 2)));

    let e = expand_e(2, 1, 0, 5, 6).unwrap();
    assert_eq!(e.constant_term(), CycElem::from_rat(5, rat(-1, 300)));
    assert!(expand_e(1, 0, 0, 5, 6).is_err());
    assert!(expand_e(2, 5, 10, 5, 6).is_err());
    assert!(expand_e(3, 1, 0, 5, 6).is_err());
}

#[test]
fn e2_00_examples() {
    let e = expand_e2_00(3, 10).unwrap();
    assert_eq!(q_rat(&e, 0), rat(-1, 12));
    assert_eq!(q_rat(&e, 1), rat(2, 1));
    assert_eq!(q_rat(&e, 4), rat(14, 1));
    for n in 1..10 {
        assert_eq!(q_rat(&e, n), rat(2 * sigma1(n), 1));
        assert!(e.coeff(3 * n - 1).unwrap().is_zero());
    }
}

#[test]
fn g_examples() {
    let g = expand_g(1, 1, 5, 5).unwrap();
    assert_eq!(g.to_string(), "3/10 + q + q^2 + q^3");
    assert_eq!(expand_g(1, 4, 5, 5).unwrap(), g.neg());
    let g = expand_g(2, 0, 4, 9).unwrap();
    assert_eq!(g.to_string(), "-1/12 + 2*q^4 + 6*q^8");
    assert!(expand_g(1, 0, 5, 5).unwrap().is_zero());
}

#[test]
fn g_constant_terms() {
    for n in 1..=12u32 {
        for r in 0..n as i64 {
            let x = rat(r, n as i64);
            let g1 = expand_g(1, r, n, 2).unwrap();
            let g2 = expand_g(2, r, n, 2).unwrap();
            if r != 0 {
                assert_eq!(q_rat(&g1, 0), -bernoulli_frac(1, &x).unwrap());
                assert_eq!(q_rat(&g2, 0), -bernoulli_frac(2, &x).unwrap() / rat(2, 1));
            } else {
                assert!(g1.is_zero());
                assert_eq!(q_rat(&g2, 0), rat(-1, 12));
            }
        }
    }
}

#[test]
fn product_constants() {
    for n in 2..=12u32 {
        for a in 1..n as i64 {
            for b in 1..n as i64 {
                let p = expand_g(1, a, n, 2).unwrap().mul(&expand_g(1, b, n, 2).unwrap()).unwrap();
                let expected = bernoulli_frac(1, &rat(a, n as i64)).unwrap() * bernoulli_frac(1, &rat(b, n as i64)).unwrap();
                assert_eq!(q_rat(&p, 0), expected);
            }
        }
    }
}

#[test]
fn reflection_and_rationality() {
    for n in 2..=12u32 {
        for r in 0..n as i64 {
            let (g1, g2) = (expand_g(1, r, n, 8).unwrap(), expand_g(2, r, n, 8).unwrap());
            assert_eq!(expand_g(1, n as i64 - r, n, 8).unwrap(), g1.neg());
            assert_eq!(expand_g(2, n as i64 - r, n, 8).unwrap(), g2);
            assert!(g1.is_rational() && g2.is_rational());
            let (gh, h) = (expand_ghat2(r, n, 8).unwrap(), expand_h(r, 0, n, 8).unwrap());
            assert!(gh.is_rational() && h.is_rational());
        }
    }
}

#[test]
fn ghat2_closed_form() {
    let prec = 12;
    for n in 2..=8u32 {
        for p in 0..n as i64 {
            let mut terms: Vec<(i64, Rat)> = Vec::new();
            if p == 0 {
                terms.push((0, rat(-1, 12)));
            }
            for m in 1..prec {
                for nn in 1..prec {
                    if m * nn >= prec {
                        break;
                    }
                    let hits = [p, -p].iter().filter(|&&s| (m - s).rem_euclid(n as i64) == 0).count() as i64;
                    terms.push((m * nn * n as i64, rat(hits * nn, 1)));
                }
            }
            let expected = QSeries::from_rat_terms(n, n as i64 * prec, terms).unwrap();
            let got = expand_ghat2(p, n, prec).unwrap();
            assert_eq!(got, expected, "N={n} p={p}");
            assert_eq!(expand_ghat2(-p, n, prec).unwrap(), got);
        }
    }
}

#[test]
fn ehat_agrees_with_e_in_weight_one() {
    for n in 1..=8u32 {
        for p in 0..n as i64 {
            for q in 0..n as i64 {
                if p == 0 && q == 0 {
                    continue;
                }
                assert_eq!(expand_ehat(1, p, q, n, 6).unwrap(), expand_e(1, p, q, n, 6).unwrap(), "N={n} ({p},{q})");
            }
        }
    }
}

#[test]
fn ehat_weight_two_level_four() {
    // only the u = 0 column survives the v-sum in the constant term
    let e = expand_ehat(2, 1, 0, 4, 4).unwrap();
    assert!(e.constant_term().is_zero());
    let e = expand_ehat(2, 0, 1, 4, 4).unwrap();
    let mut c = CycElem::zero(4);
    for u in 0..4i64 {
        let b2 = -bernoulli_frac(2, &rat(u, 4)).unwrap() / rat(2, 1);
        c = &c + &(&zeta_pow(4, u) * &CycElem::from_rat(4, b2 * rat(4, 1)));
    }
    assert_eq!(e.constant_term(), c);
}

#[test]
fn ehat_row_sums() {
    // Σ_b Ê(2)_{a,b} = N Σ_v ζ^(−av) E(2)_{0,v}
    let prec = 6;
    for n in [4u32, 5, 6] {
        for a in 0..n as i64 {
            let mut lhs = QSeries::zero(n, n as i64 * prec);
            let mut rhs = QSeries::zero(n, n as i64 * prec);
            for b in 0..n as i64 {
                lhs = lhs.add(&expand_ehat(2, a, b, n, prec).unwrap()).unwrap();
                let e = if b == 0 { expand_e2_00(n, prec).unwrap() } else { expand_e(2, 0, b, n, prec).unwrap() };
                rhs = rhs.add(&e.scale(&zeta_pow(n, -a * b)).unwrap().scale_int(n as i64)).unwrap();
            }
            assert_eq!(lhs, rhs, "N={n} a={a}");
        }
    }
}

#[test]
fn h_routes_agree() {
    let prec = 6;
    for n in [4u32, 5, 7] {
        let ni = n as i64;
        for p in 0..ni {
            let direct = expand_g(2, 0, n, prec).unwrap().sub(&expand_ghat2(p, n, prec).unwrap()).unwrap();
            // Ĝ(2)_p as the explicit transform Σ_{u,v} ζ^(−pv) E(2)_{u,v}, then τ ↦ Nτ
            let mut dft = QSeries::zero(n, ni * prec);
            for u in 0..ni {
                for v in 0..ni {
                    let e = if u == 0 && v == 0 { expand_e2_00(n, prec) } else { expand_e(2, u, v, n, prec) };
                    dft = dft.add(&e.unwrap().scale(&zeta_pow(n, -p * v)).unwrap()).unwrap();
                }
            }
            let ghat = dft.truncate(prec).substitute_q_power(ni);
            let h = expand_h(p, 0, n, prec).unwrap();
            assert_eq!(h, direct);
            assert_eq!(h, expand_g(2, 0, n, prec).unwrap().sub(&ghat).unwrap(), "N={n} p={p}");
        }
        for q in 1..ni {
            assert_eq!(expand_h(7, q, n, prec).unwrap(), expand_g(2, q, n, prec).unwrap());
            assert_eq!(expand_h(1, q, n, prec).unwrap(), expand_h(1 + ni, q + ni, n, prec).unwrap());
        }
    }
}

#[test]
fn siegel_examples() {
    let s = siegel_log_deriv(0, 1, 4, 3).unwrap();
    assert_eq!(s.constant_term(), CycElem::from_rat(4, rat(1, 12)));
    assert!(siegel_log_deriv(0, 0, 4, 3).is_err());
    assert!(siegel_log_deriv(5, 10, 5, 3).is_err());
}

#[test]
fn siegel_identity_level_five() {
    for p in 0..5i64 {
        for q in 0..5i64 {
            if p == 0 && q == 0 {
                continue;
            }
            let sum = expand_e(2, p, q, 5, 40).unwrap().add(&siegel_log_deriv(p, q, 5, 40).unwrap()).unwrap();
            assert!(sum.is_zero(), "({p},{q})");
        }
    }
}

#[test]
fn id_display_and_reduction() {
    let id = EisensteinId::g(1, 6, 5).unwrap();
    assert_eq!(id.to_string(), "N=5:G(k=1,r=1)");
    assert_eq!(id, EisensteinId::g(1, -4, 5).unwrap());
    assert_eq!(EisensteinId::h(8, 2, 5).unwrap(), EisensteinId::h(3, 7, 5).unwrap());
    assert!(EisensteinId::e(1, 5, 0, 5).is_err());
    assert!(EisensteinId::siegel(0, 0, 3).is_err());
}

#[test]
fn disk_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let id = EisensteinId::h(1, 0, 6).unwrap();
    let name = SeriesCache::file_name(&id, 7);
    assert_eq!(name.len(), 64 + 5);
    let first = SeriesCache::with_dir(dir.path()).unwrap();
    let a = first.get(&id, 7).unwrap();
    let path = dir.path().join(&name);
    let bytes = std::fs::read(&path).unwrap();

    let second = SeriesCache::with_dir(dir.path()).unwrap();
    let b = second.get(&id, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
    assert_eq!(serde_json::to_vec(&*b).unwrap(), bytes);

    std::fs::write(&path, b"not json").unwrap();
    let third = SeriesCache::with_dir(dir.path()).unwrap();
    assert_eq!(third.get(&id, 7).unwrap(), a);
}

#[test]
fn concurrent_cache_fill() {
    let cache = SeriesCache::in_memory();
    let id = EisensteinId::ghat2(2, 7).unwrap();
    let all: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..8).map(|_| s.spawn(|| cache.get(&id, 10).unwrap())).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(all.windows(2).all(|w| w[0] == w[1]));
    let p = cache.g1_product(2, 3, 7, 10).unwrap();
    assert_eq!(p, cache.g1_product(3, 2, 7, 10).unwrap());
    assert_eq!(p.prec(), 70);
    let _ = BigInt::from(0);
}
