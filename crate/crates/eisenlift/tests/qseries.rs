use eisenlift::exactcore::{rat, zeta_pow, CycElem, Rat};
use eisenlift::QSeries;
use proptest::prelude::*;

fn series(n: u32, prec: i64, terms: &[(i64, i64)]) -> QSeries {
    QSeries::from_rat_terms(n, prec, terms.iter().map(|&(e, c)| (e, rat(c, 1)))).unwrap()
}

#[test]
fn add_examples() {
    let a = series(1, 10, &[(0, 1), (1, 1)]);
    let b = series(1, 10, &[(0, 1), (1, -1)]);
    assert_eq!(a.add(&b).unwrap(), series(1, 10, &[(0, 2)]));
    let c = series(1, 7, &[(3, 1)]);
    assert_eq!(a.add(&c).unwrap().prec(), 7);
    assert!(a.add(&series(2, 10, &[])).is_err());
}

#[test]
fn mul_examples() {
    let a = series(1, 10, &[(0, 1), (1, 1)]);
    let b = series(1, 10, &[(0, 1), (1, -1)]);
    assert_eq!(a.mul(&b).unwrap(), series(1, 10, &[(0, 1), (2, -1)]));
    let q = series(5, 10, &[(5, 1)]);
    let qq = q.mul(&q).unwrap();
    assert_eq!(qq.prec(), 15);
    assert_eq!(qq.coeff(10).unwrap(), CycElem::one(5));
}

#[test]
fn g1_square_at_level_five() {
    let g = eisenlift::eisenstein::expand_g(1, 1, 5, 5).unwrap();
    let sq = g.mul(&g).unwrap();
    assert_eq!(sq.coeff_q(0).unwrap().as_rational(), Some(&rat(9, 100)));
    assert_eq!(sq.coeff_q(1).unwrap().as_rational(), Some(&rat(3, 5)));
}

#[test]
fn invert_examples() {
    let a = series(1, 8, &[(0, 1), (1, -1)]);
    let geometric = series(1, 8, &(0..8).map(|e| (e, 1)).collect::<Vec<_>>());
    assert_eq!(a.invert().unwrap(), geometric);
    assert_eq!(series(1, 4, &[(0, 2)]).invert().unwrap(), QSeries::constant(CycElem::from_rat(1, rat(1, 2)), 4));
    assert!(series(1, 4, &[(1, 1)]).invert().is_err());

    let z = zeta_pow(5, 1);
    let b = QSeries::one(5, 20).sub(&QSeries::monomial(1, z.clone(), 20)).unwrap();
    let inv = b.invert().unwrap();
    for e in 0..20 {
        assert_eq!(inv.coeff(e).unwrap(), zeta_pow(5, e));
    }
    assert_eq!(b.mul(&inv).unwrap(), QSeries::one(5, 20));
}

#[test]
fn q_ddq_examples() {
    assert!(series(5, 10, &[(0, 3)]).q_ddq().is_zero());
    assert_eq!(series(1, 10, &[(1, 1)]).q_ddq(), series(1, 10, &[(1, 1)]));
    let d = series(5, 10, &[(2, 1)]).q_ddq();
    assert_eq!(d.coeff(2).unwrap().as_rational(), Some(&rat(2, 5)));
}

#[test]
fn display() {
    let s = QSeries::from_rat_terms(5, 30, [(0, rat(2, 1)), (3, rat(-4, 1)), (5, rat(1, 1)), (10, rat(-1, 1))]).unwrap();
    assert_eq!(s.to_string(), "2 - 4*q^(3/5) + q - q^2");
    assert_eq!(QSeries::zero(3, 5).to_string(), "0");
}

#[test]
fn json_round_trip() {
    let s = QSeries::from_terms(5, 12, [(0, CycElem::from_rat(5, rat(-3, 10))), (3, zeta_pow(5, 2))]).unwrap();
    let v = s.to_json();
    assert_eq!(v["N"], 5);
    assert_eq!(v["terms"][0]["c"][0], "-3/10");
    assert_eq!(QSeries::from_json(&v).unwrap(), s);
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<QSeries>(&text).unwrap(), s);
}

#[test]
fn json_rejects_malformed() {
    let bad = serde_json::json!({"N": 5, "prec": 4, "terms": [{"e": 2, "c": ["1/1","0/1","0/1","0/1"]}, {"e": 1, "c": ["1/1","0/1","0/1","0/1"]}]});
    assert!(QSeries::from_json(&bad).is_err());
    let bad = serde_json::json!({"N": 5, "prec": 4, "terms": [{"e": 7, "c": ["1/1","0/1","0/1","0/1"]}]});
    assert!(QSeries::from_json(&bad).is_err());
    let bad = serde_json::json!({"N": 5, "prec": 4, "terms": [{"e": 1, "c": ["0/1","0/1","0/1","0/1"]}]});
    assert!(QSeries::from_json(&bad).is_err());
}

fn arb_series(n: u32, prec: i64) -> impl Strategy<Value = QSeries> {
    let coeff = prop::collection::vec((-5i64..5, 1i64..4).prop_map(|(a, b)| rat(a, b)), n as usize)
        .prop_map(move |v| CycElem::from_poly(n, v));
    prop::collection::vec((0..prec, coeff), 0..8)
        .prop_map(move |terms| QSeries::from_terms(n, prec, terms).unwrap())
}

fn arb_unit(n: u32, prec: i64) -> impl Strategy<Value = QSeries> {
    ((1i64..5), arb_series(n, prec)).prop_map(move |(c, s)| {
        let s = s.sub(&QSeries::constant(s.constant_term(), prec)).unwrap();
        s.add(&QSeries::constant(CycElem::from_rat(n, Rat::from_integer(c.into())), prec)).unwrap()
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_series(3, 12), b in arb_series(3, 12), c in arb_series(3, 12)) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(ab_c.agrees_with(&a_bc));
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn inverse(a in arb_unit(4, 10)) {
        let one = a.mul(&a.invert().unwrap()).unwrap();
        prop_assert_eq!(one, QSeries::one(4, 10));
    }

    #[test]
    fn derivation(a in arb_series(5, 15), b in arb_series(5, 15)) {
        let lhs = a.mul(&b).unwrap().q_ddq();
        let rhs = a.q_ddq().mul(&b).unwrap().add(&a.mul(&b.q_ddq()).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn json(a in arb_series(6, 9)) {
        prop_assert_eq!(QSeries::from_json(&a.to_json()).unwrap(), a);
    }
}
