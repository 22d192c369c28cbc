use std::collections::BTreeMap;

use eisenlift::modsym::*;
use eisenlift::{Cusp, MatZ};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn cusp(m: i64, n: i64) -> Cusp {
    Cusp::new(m, n).unwrap()
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| big(x)).collect()
}

#[test]
fn classify_examples() {
    assert_eq!(classify(&MatZ::new(1, 1, 0, 1)).unwrap(), MatrixClass::Parabolic(Cusp::infinity()));
    assert_eq!(classify(&MatZ::new(1, 1, 4, 5)).unwrap(), MatrixClass::Hyperbolic);
    assert_eq!(classify(&MatZ::new(0, -1, 1, 0)).unwrap(), MatrixClass::Elliptic);
    assert_eq!(classify(&MatZ::new(-1, 0, 0, -1)).unwrap(), MatrixClass::Identity);
    assert!(classify(&MatZ::new(2, 0, 0, 1)).is_err());
}

#[test]
fn continued_fraction_examples() {
    let cf = minus_cf(&big(7), &big(3)).unwrap();
    assert_eq!(cf.b(), ints(&[3, 2, 2]).as_slice());
    assert_eq!((0..=2).map(|k| cf.convergent(k)).collect::<Vec<_>>(), vec![cusp(3, 1), cusp(5, 2), cusp(7, 3)]);
    let cf = minus_cf(&big(1), &big(4)).unwrap();
    assert_eq!(cf.b(), ints(&[1, 2, 2, 2]).as_slice());
    assert_eq!(cf.denominators(), ints(&[0, 1, 2, 3, 4]).as_slice());
    assert_eq!(minus_cf(&big(9), &big(1)).unwrap().b(), ints(&[9]).as_slice());
    assert!(minus_cf(&big(1), &big(0)).is_err());
    assert!(minus_cf(&big(2), &big(4)).is_err());
}

#[test]
fn gamma_k_examples() {
    let cf = minus_cf(&big(1), &big(4)).unwrap();
    assert_eq!(gamma_k(&cf, 0).unwrap(), MatZ::new(-1, 1, -1, 0));
    assert_eq!(gamma_k(&cf, -1).unwrap(), MatZ::identity());
    assert!(gamma_k(&cf, 4).is_err());
    let cf = minus_cf(&big(7), &big(3)).unwrap();
    assert_eq!(gamma_k(&cf, 2).unwrap(), MatZ::new(-7, 5, -3, 2));
}

#[test]
fn parabolic_examples() {
    assert_eq!(parabolic_data(&MatZ::new(1, 6, 0, 1)).unwrap(), (Cusp::infinity(), MatZ::identity(), big(6)));
    assert_eq!(parabolic_data(&MatZ::new(1, 0, 4, 1)).unwrap(), (cusp(0, 1), MatZ::new(0, -1, 1, 0), big(-4)));
    let (r, gr, _) = parabolic_data(&MatZ::new(1, -1, 4, -3)).unwrap();
    assert_eq!(r, cusp(1, 2));
    assert_eq!(gr.act(&Cusp::infinity()), r);
    assert!(parabolic_data(&MatZ::new(1, 1, 4, 5)).is_err());
}

#[test]
fn decomposition_examples() {
    let d = decompose_cycle(&MatZ::new(1, 3, 0, 1), 5).unwrap();
    assert_eq!(d.kind, CycleKind::Parabolic);
    assert_eq!(d.caps.len(), 1);
    assert_eq!((d.caps[0].cusp.clone(), d.caps[0].coeff.clone()), (Cusp::infinity(), big(3)));
    assert!(d.symbols.is_empty());

    let d = decompose_cycle(&MatZ::new(1, 0, 4, 1), 4).unwrap();
    assert_eq!((d.caps[0].cusp.clone(), d.caps[0].coeff.clone()), (cusp(0, 1), big(-4)));

    let d = decompose_cycle(&MatZ::new(1, 1, 4, 5), 4).unwrap();
    assert_eq!(d.kind, CycleKind::Hyperbolic);
    let caps: Vec<(Cusp, i64)> = d.caps.iter().map(|c| (c.cusp.clone(), i64::try_from(&c.coeff).unwrap())).collect();
    // b₀ − b·q₂ + p₂·d = 1 − 3 + 5
    assert_eq!(caps, vec![(Cusp::infinity(), 3), (cusp(1, 1), 2), (cusp(1, 2), 2), (cusp(1, 3), 2)]);
    let cf = minus_cf(&big(1), &big(4)).unwrap();
    let expected: Vec<MatZ> = (0..=3).map(|k| gamma_k(&cf, k).unwrap()).collect();
    assert_eq!(d.symbols.iter().map(|s| s.gamma.clone()).collect::<Vec<_>>(), expected);
    assert!(d.symbols.iter().all(|s| s.coeff == big(1)));
}

#[test]
fn decomposition_errors() {
    assert!(decompose_cycle(&MatZ::identity(), 5).is_err());
    assert!(decompose_cycle(&MatZ::new(1, 1, 4, 5), 5).is_err());
    assert!(decompose_cycle(&MatZ::new(1, 1, 4, 5), 3).is_err());
    assert!(decompose_cycle(&MatZ::new(2, 1, 4, 5), 4).is_err());
}

#[test]
fn decomposition_json() {
    for g in [MatZ::new(1, 1, 4, 5), MatZ::new(1, 0, 4, 1)] {
        let d = decompose_cycle(&g, 4).unwrap();
        let v = d.to_json();
        assert!(v["caps"][0]["gamma_r"].is_string());
        assert_eq!(CycleDecomposition::from_json(&v).unwrap(), d);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<CycleDecomposition>(&s).unwrap(), d);
    }
}

#[test]
fn cusp_equivalence_examples() {
    assert!(cusp_equivalent(5, &Cusp::infinity(), &cusp(1, 5)));
    assert!(!cusp_equivalent(5, &cusp(0, 1), &Cusp::infinity()));
}

fn class_count(n: u32) -> usize {
    let bound = 3 * n as i64;
    let mut reps: Vec<Cusp> = Vec::new();
    for den in 0..=bound {
        for num in -bound..=bound {
            if num.gcd(&den) != 1 {
                continue;
            }
            let c = cusp(num, den);
            if !reps.iter().any(|r| cusp_equivalent(n, r, &c)) {
                reps.push(c);
            }
        }
    }
    reps.len()
}

// orbits of (m, n) mod N under (m, n) ~ (m + jn, n) ~ (−m, −n)
fn orbit_count(n: u32) -> usize {
    let n = n as i64;
    let mut parent: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
    fn find(p: &mut BTreeMap<(i64, i64), (i64, i64)>, x: (i64, i64)) -> (i64, i64) {
        let up = p[&x];
        if up == x {
            return x;
        }
        let root = find(p, up);
        p.insert(x, root);
        root
    }
    let pts: Vec<(i64, i64)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a.gcd(&b).gcd(&n) == 1).collect();
    for &x in &pts {
        parent.insert(x, x);
    }
    for &(a, b) in &pts {
        for y in [((a + b) % n, b), ((n - a) % n, (n - b) % n)] {
            let (rx, ry) = (find(&mut parent, (a, b)), find(&mut parent, y));
            parent.insert(rx, ry);
        }
    }
    let roots: std::collections::BTreeSet<_> = pts.iter().map(|&x| find(&mut parent, x)).collect();
    roots.len()
}

#[test]
fn cusp_class_counts() {
    for (n, expected) in [(5, 4), (6, 4), (7, 6), (8, 6)] {
        assert_eq!(class_count(n), expected, "N={n}");
        assert_eq!(orbit_count(n), expected, "N={n}");
    }
}

#[test]
fn matrix_for_cusp_examples() {
    assert_eq!(matrix_for_cusp(&Cusp::infinity()), MatZ::identity());
    assert_eq!(matrix_for_cusp(&cusp(0, 1)), MatZ::new(0, -1, 1, 0));
    assert_eq!(matrix_for_cusp(&cusp(2, 5)), MatZ::new(2, 1, 5, 3));
}

#[test]
fn reduce_symbol_examples() {
    let s = reduce_symbol(&cusp(0, 1), &Cusp::infinity()).unwrap();
    assert_eq!(s.terms, vec![(MatZ::identity(), big(1))]);
    let s = reduce_symbol(&Cusp::infinity(), &cusp(1, 4)).unwrap();
    let mut expected = BTreeMap::new();
    expected.insert(cusp(1, 4), big(1));
    expected.insert(Cusp::infinity(), big(-1));
    assert_eq!(s.boundary(), expected);
    assert!(reduce_symbol(&cusp(1, 3), &cusp(1, 3)).is_err());
    let joined = reduce_symbol(&cusp(2, 7), &cusp(-1, 3)).unwrap().add(&reduce_symbol(&cusp(-1, 3), &cusp(5, 4)).unwrap());
    let mut expected = BTreeMap::new();
    expected.insert(cusp(5, 4), big(1));
    expected.insert(cusp(2, 7), big(-1));
    assert_eq!(joined.boundary(), expected);
}

#[test]
fn hecke_examples() {
    assert_eq!(hecke_sigma(1, 7).unwrap(), MatZ::identity());
    assert_eq!(hecke_sigma(2, 5).unwrap(), MatZ::new(13, 5, 5, 2));
    assert_eq!(hecke_sigma(3, 4).unwrap(), MatZ::new(11, 4, 8, 3));
    assert!(hecke_sigma(2, 4).is_err());
    assert_eq!(hecke_reps(1, 5).unwrap(), vec![MatZ::identity()]);
    let sigma2 = hecke_sigma(2, 5).unwrap();
    assert_eq!(
        hecke_reps(2, 5).unwrap(),
        vec![MatZ::new(1, 0, 0, 2), MatZ::new(1, 1, 0, 2), sigma2.mul(&MatZ::new(2, 0, 0, 1))]
    );
    assert_eq!(hecke_reps(7, 5).unwrap().len(), 8);
}

#[test]
fn hecke_sigma_congruences() {
    for n in 1..=24u32 {
        let ni = n as i64;
        for a in 1..ni.max(2) {
            if a.gcd(&ni) != 1 {
                continue;
            }
            let s = hecke_sigma(a, n).unwrap();
            assert!(s.is_sl2());
            let inv = (1..=ni).find(|x| (x * a) % ni == 1 % ni).unwrap();
            let r = |x: &BigInt| x.mod_floor(&big(ni));
            assert_eq!((r(&s.a), r(&s.b), r(&s.c), r(&s.d)), (big(inv % ni), big(0), big(0), big(a % ni)));
        }
    }
}

#[test]
fn hecke_counts() {
    for n in 1..=20u64 {
        for level in 4..=12u32 {
            let expected: u64 = (1..=n).filter(|d| n % d == 0 && (n / d).gcd(&(level as u64)) == 1).sum();
            assert_eq!(hecke_reps(n, level).unwrap().len() as u64, expected);
        }
    }
}

#[test]
fn matrix_and_cusp_strings() {
    let g: MatZ = "1,1,4,5".parse().unwrap();
    assert_eq!(g, MatZ::new(1, 1, 4, 5));
    assert_eq!(g.to_string(), "1,1,4,5");
    assert!("1,2,3".parse::<MatZ>().is_err());
    assert_eq!("inf".parse::<Cusp>().unwrap(), Cusp::infinity());
    assert!("1/x".parse::<Cusp>().is_err());
    assert_eq!("3/-5".parse::<Cusp>().unwrap(), cusp(-3, 5));
    assert_eq!(cusp(-3, 5).to_string(), "-3/5");
    assert_eq!(Cusp::infinity().to_string(), "inf");
}

fn word(n: u32, letters: &[(usize, bool)]) -> MatZ {
    let gens = gamma1_sample_generators(n);
    letters.iter().fold(MatZ::identity(), |acc, &(i, inv)| {
        let g = &gens[i % gens.len()];
        acc.mul(&if inv { g.inverse() } else { g.clone() })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn continued_fractions(a in -5000i64..5000, c in 1i64..5000, neg in any::<bool>()) {
        prop_assume!(a.gcd(&c) == 1);
        let c = if neg { -c } else { c };
        let cf = minus_cf(&big(a), &big(c)).unwrap();
        let n = cf.n() as i64;
        prop_assert_eq!(cf.convergent(n), cusp(a, c));
        for k in 0..=n {
            prop_assert!(gamma_k(&cf, k).unwrap().is_sl2());
            prop_assert_eq!(cf.p(k - 1) * cf.q(k) - cf.p(k) * cf.q(k - 1), big(1));
            if k >= 1 {
                prop_assert!(cf.b()[k as usize] >= big(2));
            }
            if k < n {
                let g = gamma_k(&cf, k).unwrap();
                prop_assert_eq!(g.act(&Cusp::new(cf.b()[k as usize + 1].clone(), 1).unwrap()), cf.convergent(k + 1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parabolic_invariance(n in 4u32..=9, w in prop::collection::vec((0usize..5, any::<bool>()), 0..=3),
                            b in -6i64..6, t in -5i64..5, flip in any::<bool>()) {
        prop_assume!(b != 0);
        let d = word(n, &w);
        let g = d.mul(&MatZ::new(1, b * n as i64, 0, 1)).mul(&d.inverse());
        let (r, gr, bg) = parabolic_data(&g).unwrap();
        prop_assert_eq!(gr.act(&Cusp::infinity()), r);
        let mut alt = gr.mul(&MatZ::t(t));
        if flip { alt = alt.neg(); }
        let mut conj = alt.inverse().mul(&g).mul(&alt);
        if conj.a < big(0) { conj = conj.neg(); }
        prop_assert_eq!(conj, MatZ::new(1, bg, 0, 1));
    }

    #[test]
    fn symbol_boundary_is_cusp_of_gamma(n in 4u32..=9, w in prop::collection::vec((0usize..5, any::<bool>()), 1..=6)) {
        let g = word(n, &w);
        prop_assume!(classify(&g).unwrap() == MatrixClass::Hyperbolic);
        let d = decompose_cycle(&g, n).unwrap();
        let h = if g.c < big(0) { g.neg() } else { g.clone() };
        let end = Cusp::new(h.a.clone(), h.c.clone()).unwrap();
        let mut expected = BTreeMap::new();
        expected.insert(end.clone(), big(1));
        expected.insert(Cusp::infinity(), big(-1));
        prop_assert_eq!(d.symbol_boundary(), expected);
        prop_assert!(cusp_equivalent(n, &end, &Cusp::infinity()));
    }

    #[test]
    fn orbits_respect_equivalence(n in 4u32..=9, w in prop::collection::vec((0usize..5, any::<bool>()), 0..=5),
                                  m in -20i64..20, k in 0i64..20) {
        prop_assume!(m.gcd(&k) == 1);
        let c = cusp(m, k);
        prop_assert!(cusp_equivalent(n, &c, &word(n, &w).act(&c)));
    }
}
