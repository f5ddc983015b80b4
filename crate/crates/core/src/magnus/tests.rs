use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::classical::make_d2;

fn q(n: i64, d: i64) -> PadicNum {
    PadicNum::frac(n, d)
}

fn word(s: &str, p: u64, level: u32) -> FreeWord {
    FreeWord::parse(s, p, level).unwrap()
}

#[test]
fn embedding_basics() {
    let e = embed_e(&word("y0", 2, 1), 3);
    assert_eq!(e.coeff(&[y(0)]), q(1, 1));
    assert_eq!(e.coeff(&[y(0), y(0)]), q(1, 2));
    assert_eq!(e.coeff(&[y(0), y(0), y(0)]), q(1, 6));
    assert_eq!(embed_e(&word("y0 y0^-1", 2, 1), 3), NcSeries::one(2, 3));

    let c = embed_e(&word("[y0,y1]", 2, 1), 3);
    assert!(c.coeff(&[y(0)]).is_zero() && c.coeff(&[y(1)]).is_zero());
    assert_eq!(c.coeff(&[y(0), y(1)]), q(1, 1));
    assert_eq!(c.coeff(&[y(1), y(0)]), q(-1, 1));
}

#[test]
fn embedding_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let a = FreeWord::random_kernel(&mut rng, 3, 1, 6);
        let b = FreeWord::random_kernel(&mut rng, 3, 1, 6);
        assert_eq!(embed_e(&a.mul(&b), 3), embed_e(&a, 3).mul(&embed_e(&b, 3)));
    }
}

#[test]
fn specialization() {
    assert_eq!(specialize_e0(&embed_e(&word("x", 3, 1), 3)), NcSeries::one(3, 3));
    let y0 = embed_e(&word("y0", 3, 1), 3);
    assert_eq!(specialize_e0(&y0), y0);
    let c = specialize_e0(&embed_e(&word("[x,y0]", 3, 1), 3));
    assert!(c.component(1).is_zero());
    let w = word("[x,y1] y2 x^2 y0^-1 x^-2", 3, 1);
    assert_eq!(specialize_e0(&embed_e(&w, 3)), embed_e0(&w, 3));
}

#[test]
fn lie_and_shuffle() {
    assert!(log_lie_check(&embed_e(&word("y0", 2, 1), 3)));
    let c = embed_e(&word("[y0,y1]", 2, 1), 3);
    assert!(log_lie_check(&c));
    let l = c.log();
    assert_eq!(l.coeff(&[y(0), y(1)]), q(1, 1));
    assert_eq!(l.coeff(&[y(1), y(0)]), q(-1, 1));

    let mut bad = NcSeries::one(2, 3);
    bad.add_term(vec![y(0), y(1)], PadicNum::one());
    assert!(!log_lie_check(&bad));
    assert!(shuffle_check_all(&bad).is_some());

    let s = embed_e(&word("y0", 2, 1), 3);
    assert!(shuffle_check(&s, &[y(0)], &[y(0)]));
    let g = embed_e(&word("[y0,y1] y0 y1", 2, 1), 3);
    assert!(shuffle_check(&g, &[y(0)], &[y(1)]));
    assert!(shuffle_check_all(&specialize_e0(&g)).is_none());
}

#[test]
fn projection_commutes_with_embedding() {
    let w = word("y2 [x,y1]", 2, 2);
    let lhs = project_series(&embed_e(&w, 3), 2, 2, 1).unwrap();
    let rhs = embed_e(&w.project(1).unwrap(), 3);
    assert_eq!(lhs, rhs);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..4 {
        let g = FreeWord::random_kernel(&mut rng, 2, 2, 6);
        assert_eq!(project_series(&embed_e(&g, 3), 2, 2, 0).unwrap(), embed_e(&g.project(0).unwrap(), 3));
    }
}

#[test]
fn named_coefficients() {
    let s = embed_e(&word("y1", 3, 1), 2);
    let c = extract_coeffs(&s);
    assert_eq!(c.alpha(1), q(1, 1));
    assert!(c.alpha(0).is_zero() && c.alpha(2).is_zero());
    assert_eq!(c.beta(1, 1), q(1, 2));
    assert!(c.beta(0, 1).is_zero() && c.gamma(1).is_zero());

    let s = embed_e(&word("[x,y0]", 3, 1), 2);
    assert_eq!(extract_coeffs(&s).gamma(0), q(1, 1));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let s = embed_e(&FreeWord::random_kernel(&mut rng, 3, 1, 8), 2);
        assert!(s.coeff(&[X]).is_zero());
        for i in 0..3 {
            assert!((s.coeff(&[X, y(i)]) + s.coeff(&[y(i), X])).is_zero());
        }
    }
}

#[test]
fn beta_measure_examples() {
    let ctx = PrimeContext::new(2, 2, 8).unwrap();
    let b = beta_measures(&word("y0", 2, 2), 1, ctx).unwrap();
    assert_eq!(b, crate::classical::make_dirac(&[0], ctx).with_denom_bound(0));
    let unit = beta_measures(&word("y0", 2, 2), 0, ctx).unwrap();
    assert_eq!(unit.get(2, &[]), &PadicNum::one());

    let ctx1 = PrimeContext::new(2, 1, 8).unwrap();
    let g = word("[y0,y1]", 2, 1);
    for r in 1..=2 {
        assert!(beta_measures(&g, r, ctx1).unwrap().validate().pass);
    }
    assert!(matches!(beta_measures(&word("x", 2, 1), 1, ctx1), Err(Error::NotKernel(1))));
}

#[test]
fn star_identity_two_letters() {
    let ctx = PrimeContext::new(2, 1, 8).unwrap();
    let (g, h) = (word("y0", 2, 1), word("y1", 2, 1));
    let lhs = beta_sequence(&g.mul(&h), 2, ctx).unwrap();
    let rhs = beta_sequence(&g, 2, ctx).unwrap().star(&beta_sequence(&h, 2, ctx).unwrap()).unwrap();
    assert!(lhs.identical(&rhs));
}

#[test]
fn symmetrized_beta_is_alpha_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let g = FreeWord::random_kernel(&mut rng, 3, 1, 8);
        assert_eq!(prop91_defect(&g, 2, 1).unwrap(), None);
        assert_eq!(prop91_defect(&g, 3, 1).unwrap(), None);
    }
}

#[test]
fn d2_from_word_is_a_measure() {
    let ctx = PrimeContext::new(3, 2, 8).unwrap();
    let g = word("[x,y0]", 3, 2);
    let (alpha, gamma) = alpha_gamma_tables(&g).unwrap();
    let d2 = make_d2(&alpha, &gamma, ctx).unwrap();
    assert!(d2.validate().pass);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = FreeWord::random_kernel(&mut rng, 3, 2, 10);
    let (alpha, gamma) = alpha_gamma_tables(&g).unwrap();
    assert!(make_d2(&alpha, &gamma, ctx).unwrap().validate().pass);
}

#[test]
fn thm31_examples() {
    // Y-only words: exact
    let g = word("[y0,y1] y2 y1^-1", 2, 2);
    let shape = WordShape::new(vec![0, 0, 0], vec![0, 1]).unwrap();
    let rep = thm31_congruence(&g, &shape, 1, 1).unwrap();
    assert_eq!(rep.achieved, None);

    let g = word("[x,y0]", 3, 3);
    let shape = WordShape::new(vec![1, 0], vec![0]).unwrap();
    let r2 = thm31_congruence(&g, &shape, 1, 2).unwrap();
    assert!(r2.pass && r2.guarantee >= 2, "{r2:?}");
    let r1 = thm31_congruence(&g, &shape, 1, 1).unwrap();
    assert!(r1.pass && r1.guarantee < r2.guarantee);
    assert!(thm31_congruence(&g, &shape, 2, 2).is_err());
}

#[test]
fn thm31_random_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let g = FreeWord::random_kernel(&mut rng, 2, 2, 8);
        for xs in [vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![1, 0, 1], vec![0, 1, 0]] {
            let idx = vec![1; xs.len() - 1];
            let rep = thm31_congruence(&g, &WordShape::new(xs, idx).unwrap(), 1, 1).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }
}

#[test]
fn roundtrip_examples() {
    let ctx = PrimeContext::new(2, 3, 8).unwrap();
    let rep = prop72_roundtrip(&word("y0", 2, 3), 1, 3, ctx).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.entries[0].from_word, q(1, 1));
    assert!(rep.entries[1..].iter().all(|e| e.from_word.is_zero()));
    assert!(prop72_roundtrip(&word("[y0,y1]", 2, 3), 2, 3, ctx).unwrap().pass);
    assert!(prop72_roundtrip(&word("y0 y1", 2, 3), 1, 3, ctx).unwrap().pass);
    assert!(prop72_roundtrip(&word("[x,y3] y5 y2^-1", 2, 3), 2, 2, ctx).unwrap().pass);
}

#[test]
fn json_dump() {
    let s = embed_e(&word("[x,y0]", 2, 1), 2);
    let j = s.to_json(1);
    assert_eq!(j["level"], 1);
    assert_eq!(j["degree"], 2);
    let terms = j["terms"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["mono"] == "X.Y0" && t["value"] == "1"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn words_give_group_like_series(seed in any::<u64>(), len in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FreeWord::random_kernel(&mut rng, 2, 1, len);
        let s = embed_e(&g, 3);
        prop_assert!(log_lie_check(&s));
        prop_assert!(shuffle_check_all(&specialize_e0(&s)).is_none());
        let ctx = PrimeContext::new(2, 1, 8).unwrap();
        let b2 = beta_measures(&g, 2, ctx).unwrap();
        prop_assert!(b2.validate().pass);
        prop_assert!(b2.tables().iter().flatten().all(|v| vp_at_least_or_zero(v, 2, -1)));
    }
}

fn vp_at_least_or_zero(v: &PadicNum, p: u64, e: i64) -> bool {
    crate::padic::vp_at_least(v, p, e)
}
