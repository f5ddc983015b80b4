use proptest::prelude::*;

use super::ops::*;
use super::transform::{one_plus_t_pow, series_compose, series_mul, DenseSeries};
use super::*;
use crate::classical::{make_dirac, make_e1, make_m};
use crate::padic::{binom, vp_at_least, PadicNum, PrimeContext};

fn ctx(p: u64, n: u32) -> PrimeContext {
    PrimeContext::new(p, n, 3).unwrap()
}

fn q(a: i64) -> PadicNum {
    PadicNum::from(a)
}

fn dirac_combo(cx: PrimeContext, pts: &[(i64, i64)]) -> LevelFamily {
    let ds: Vec<LevelFamily> = pts.iter().map(|&(a, _)| make_dirac(&[a], cx)).collect();
    let cs: Vec<PadicNum> = pts.iter().map(|&(_, m)| q(m)).collect();
    linear_combine(&cs, &ds.iter().collect::<Vec<_>>()).unwrap()
}

#[test]
fn linear_combinations() {
    let cx = ctx(3, 2);
    let mu = make_m(&q(-1), cx).unwrap();
    let nu = make_dirac(&[2], cx);
    assert!(measures_identical(&linear_combine(&[q(1), q(0)], &[&mu, &nu]).unwrap(), &mu));
    assert!(measures_identical(&sub(&mu, &mu).unwrap(), &LevelFamily::zero(cx, 1)));
    let two = make_dirac(&[0, 0], cx);
    assert!(matches!(linear_combine(&[q(1), q(1)], &[&mu, &two]), Err(crate::Error::DimMismatch(..))));
}

#[test]
fn translation_and_scaling() {
    let cx = ctx(3, 3);
    let d = make_dirac(&[2], cx);
    assert!(measures_identical(&translate(&d, &[q(5)]).unwrap(), &make_dirac(&[7], cx)));
    assert!(measures_identical(&translate(&d, &[q(0)]).unwrap(), &d));
    assert!(measures_identical(&scale_action(&d, &q(1)).unwrap(), &d));
    assert!(measures_identical(&scale_action(&d, &q(-1)).unwrap(), &make_dirac(&[-2], cx)));
    assert!(scale_action(&d, &q(3)).is_err());
    // P(T_1 δ_0) = 1 + T
    let p = iwasawa_p(&translate(&make_dirac(&[0], cx), &[q(1)]).unwrap(), 3, 3).unwrap();
    let vals: Vec<PadicNum> = (0..=3).map(|k| p.coeff(&[k]).value.clone()).collect();
    assert_eq!(vals, vec![q(1), q(1), q(0), q(0)]);
}

#[test]
fn scaling_multiplies_moments() {
    let cx = ctx(5, 2);
    let mu = dirac_combo(cx, &[(1, 1), (2, 1)]);
    let md = scale_action(&mu, &q(2)).unwrap();
    // exact for Dirac masses at small points: ∫x² = 1 + 4, and 2² times it after m_2
    let x2 = Poly::monomial(vec![2]);
    let a = riemann_sum(&md, &[0], 0, &x2, 2).unwrap();
    let b = riemann_sum(&mu, &[0], 0, &x2, 2).unwrap();
    assert_eq!(b, q(5));
    assert!(vp_at_least(&(a - q(4) * b), 5, 2));
}

#[test]
fn affine_pushforwards() {
    let cx = ctx(3, 3);
    let mu = make_e1(&q(2), cx).unwrap();
    let neg = pushforward_affine(&mu, &[(-1, q(0))]).unwrap();
    assert!(measures_identical(&neg, &reflect(&mu)));
    let once = pushforward_affine(&make_dirac(&[0], cx), &[(-1, q(1))]).unwrap();
    assert!(measures_identical(&once, &make_dirac(&[1], cx)));
    let twice = pushforward_affine(&pushforward_affine(&mu, &[(-1, q(1))]).unwrap(), &[(-1, q(1))]).unwrap();
    assert!(measures_identical(&twice, &mu));
}

#[test]
fn signed_permutations() {
    let cx = ctx(3, 2);
    let mu = exterior_product(&make_dirac(&[1], cx), &make_e1(&q(2), cx).unwrap()).unwrap();
    assert!(measures_identical(&signed_perm_action(&mu, &[0, 1], &[1, 1]).unwrap(), &mu));
    let one = make_e1(&q(2), cx).unwrap();
    let flipped = signed_perm_action(&one, &[0], &[-1]).unwrap();
    assert!(measures_identical(&flipped, &scale(&q(-1), &reflect(&one))));
    // the sign character sums to zero over the whole group on δ_(0,0)
    let d00 = make_dirac(&[0, 0], cx);
    let mut parts = vec![];
    for s in [[0usize, 1], [1, 0]] {
        for e in [[1i8, 1], [1, -1], [-1, 1], [-1, -1]] {
            parts.push(signed_perm_action(&d00, &s, &e).unwrap());
        }
    }
    let sum = linear_combine(&vec![q(1); 8], &parts.iter().collect::<Vec<_>>()).unwrap();
    assert!(measures_identical(&sum, &LevelFamily::zero(cx, 2)));
    assert!(signed_perm_action(&d00, &[0, 0], &[1, 1]).is_err());
}

#[test]
fn exterior_products() {
    let cx = ctx(3, 2);
    let (a, b, c) = (make_dirac(&[1], cx), make_dirac(&[2], cx), make_dirac(&[0], cx));
    let l = exterior_product(&exterior_product(&a, &b).unwrap(), &c).unwrap();
    let r = exterior_product(&a, &exterior_product(&b, &c).unwrap()).unwrap();
    assert!(measures_identical(&l, &r));
    assert!(measures_identical(&l, &make_dirac(&[1, 2, 0], cx)));

    // P(α·β) = P(α)(T_1)·P(β)(T_2)
    let alpha = dirac_combo(cx, &[(1, 1), (2, 1)]);
    let beta = make_dirac(&[0], cx);
    let k = 3;
    let pab = iwasawa_p(&exterior_product(&alpha, &beta).unwrap(), k, 2).unwrap();
    let pa = iwasawa_p(&alpha, k, 2).unwrap();
    let pb = iwasawa_p(&beta, k, 2).unwrap();
    for c in &pab.coeffs {
        let want = &pa.coeff(&[c.exp[0]]).value * &pb.coeff(&[c.exp[1]]).value;
        assert!(vp_at_least(&(&c.value - want), 3, c.guarantee));
    }
}

#[test]
fn box_integrals() {
    let cx = ctx(3, 3);
    let m = make_m(&q(-1), cx).unwrap();
    let one = Poly::one(1);
    for eval in 1..=3 {
        assert_eq!(box_integral(&m, &[0], 0, &one, eval).unwrap().value, m.get(0, &[0]).clone());
    }
    let x = Poly::var(1, 0);
    for eval in 1..=3 {
        assert_eq!(box_integral(&make_dirac(&[2], cx), &[0], 0, &x, eval).unwrap().value, q(2));
    }
    // the Riemann sum sees the atom's residue, so it is exact once p^eval > a
    let d = make_dirac(&[5], cx);
    assert_eq!(box_integral(&d, &[0], 0, &x, 1).unwrap().value, q(2));
    for eval in 2..=3 {
        assert_eq!(box_integral(&d, &[0], 0, &x, eval).unwrap().value, q(5));
    }
    let a = box_integral(&m, &[0], 0, &x, 2).unwrap();
    let b = box_integral(&m, &[0], 0, &x, 3).unwrap();
    assert!(vp_at_least(&(a.value - b.value), 3, a.guarantee.min(b.guarantee)));
    assert!(a.guarantee >= 1);
    assert!(box_integral(&m, &[3], 1, &x, 2).is_err());
    assert!(box_integral(&m, &[1], 1, &x, 1).is_err());
}

#[test]
fn exponential_routes_agree() {
    let cx = ctx(3, 3);
    let mu = dirac_combo(cx, &[(1, 1), (3, 2)]);
    let direct = transform_f(&mu, 5, 3).unwrap();
    let subst = iwasawa_p(&mu, 5, 3).unwrap().to_exponential();
    assert_eq!(direct.coeffs.iter().map(|c| &c.value).collect::<Vec<_>>(), subst.coeffs.iter().map(|c| &c.value).collect::<Vec<_>>());
    // F(δ_a) = e^{aX}
    let fa = transform_f(&make_dirac(&[2], cx), 4, 3).unwrap();
    for k in 0..=4u32 {
        let want = q(2).pow(k) / PadicNum::from(crate::padic::factorial(k));
        assert_eq!(fa.coeff(&[k]).value, want);
    }
}

#[test]
fn iwasawa_of_dirac() {
    let cx = ctx(5, 2);
    let p = iwasawa_p(&make_dirac(&[3], cx), 5, 2).unwrap();
    for k in 0..=5u32 {
        assert_eq!(p.coeff(&[k]).value, binom(&q(3), k));
    }
    let zero = iwasawa_p(&make_m(&q(1), cx).unwrap(), 4, 2).unwrap();
    assert!(zero.coeffs.iter().all(|c| c.value.is_zero()));
    let json = p.to_json();
    assert!(json.contains("\"guarantee\""));
}

#[test]
fn translation_functoriality() {
    let cx = ctx(3, 3);
    let mu = make_e1(&q(2), cx).unwrap();
    let k = 4;
    let c = q(5);
    let lhs = iwasawa_p(&translate(&mu, std::slice::from_ref(&c)).unwrap(), k, 3).unwrap();
    let base = iwasawa_p(&mu, k, 3).unwrap();
    let pv: Vec<PadicNum> = base.coeffs.iter().map(|x| x.value.clone()).collect();
    let rhs = series_mul(&pv, &one_plus_t_pow(&c, k), k);
    for (co, want) in lhs.coeffs.iter().zip(rhs) {
        let g = co.guarantee.min(base.coeff(&co.exp).guarantee);
        assert!(vp_at_least(&(&co.value - want), 3, g));
    }
}

#[test]
fn scaling_functoriality() {
    let cx = ctx(5, 3);
    let mu = make_m(&q(7), cx).unwrap();
    let d = q(2);
    let k = 3;
    let lhs = iwasawa_p(&scale_action(&mu, &d).unwrap(), k, 3).unwrap();
    let base = iwasawa_p(&mu, k, 3).unwrap();
    let pv: Vec<PadicNum> = base.coeffs.iter().map(|x| x.value.clone()).collect();
    let mut inner = one_plus_t_pow(&d, k);
    inner[0] = q(0);
    let rhs = series_compose(&pv, &inner, k);
    let g = base.coeffs.iter().map(|c| c.guarantee).min().unwrap();
    for (co, want) in lhs.coeffs.iter().zip(rhs) {
        assert!(vp_at_least(&(&co.value - want), 5, g.min(co.guarantee)));
    }
}

#[test]
fn commutation_of_scaling_and_translation() {
    let cx = ctx(3, 3);
    let mu = make_e1(&q(5), cx).unwrap();
    for (d, c) in [(q(2), q(4)), (q(-1), q(1)), (PadicNum::frac(1, 2), q(7))] {
        let l = scale_action(&translate(&mu, std::slice::from_ref(&c)).unwrap(), &d).unwrap();
        let r = translate(&scale_action(&mu, &d).unwrap(), &[&d * &c]).unwrap();
        assert!(measures_identical(&l, &r));
    }
}

#[test]
fn star_is_unital_and_associative() {
    let cx = ctx(2, 2);
    let a = GradedSequence::new(vec![
        LevelFamily::scalar(cx, q(1)),
        make_dirac(&[1], cx),
        make_dirac(&[0, 1], cx),
    ])
    .unwrap();
    let b = GradedSequence::new(vec![
        LevelFamily::scalar(cx, q(1)),
        make_e1(&q(3), cx).unwrap(),
        make_dirac(&[2, 3], cx),
    ])
    .unwrap();
    let u = GradedSequence::unit(cx, 2);
    assert!(a.star(&u).unwrap().identical(&a));
    assert!(u.star(&a).unwrap().identical(&a));
    let ab = a.star(&b).unwrap();
    let deg1 = add(b.get(1), a.get(1)).unwrap();
    assert!(measures_identical(ab.get(1), &deg1));
    let l = ab.star(&a).unwrap();
    let r = a.star(&b.star(&a).unwrap()).unwrap();
    assert!(l.identical(&r));
}

#[test]
fn dense_series_products() {
    let one_t = DenseSeries::from_univariate(&[q(1), q(1)], 2, 0, 3);
    let one_u = DenseSeries::from_univariate(&[q(1), q(1)], 2, 1, 3);
    let prod = one_t.mul(&one_u);
    assert_eq!(prod.get(&[1, 1]), q(1));
    assert_eq!(prod.get(&[2, 0]), q(0));
}

#[test]
fn csv_dump() {
    let cx = ctx(3, 1);
    let csv = make_dirac(&[2], cx).to_csv();
    assert_eq!(csv, "n,a_1,value\n0,0,1\n1,0,0\n1,1,0\n1,2,1\n");
}

#[test]
fn dirac_combinations_integrate_exactly() {
    let mut d = DiracCombination::new(1);
    d.add_mass(vec![-1], q(2));
    d.add_mass(vec![4], q(3));
    let x = Poly::var(1, 0);
    assert_eq!(d.box_integral(3, &[2], 1, &x), q(-2));
    assert_eq!(d.box_integral(3, &[1], 1, &x), q(12));
    let cx = ctx(3, 2);
    assert!(d.to_family(cx).validate().pass);
    let moved = d.pushforward_affine(&[(-1, 1)]);
    assert!(measures_identical(&moved.to_family(cx), &pushforward_affine(&d.to_family(cx), &[(-1, q(1))]).unwrap()));
}

proptest! {
    #[test]
    fn dirac_families_validate(a in -50i64..50, b in -50i64..50, p in prop::sample::select(vec![2u64, 3, 5])) {
        let cx = ctx(p, 2);
        prop_assert!(make_dirac(&[a], cx).validate().pass);
        prop_assert!(make_dirac(&[a, b], cx).validate().pass);
    }

    #[test]
    fn operations_preserve_distributions(c in -30i64..30, d in prop::sample::select(vec![1i64, 2, -1, 4]), s in -20i64..20) {
        let cx = ctx(3, 3);
        let mu = make_m(&PadicNum::from(c), cx).unwrap();
        prop_assert!(translate(&mu, &[q(s)]).unwrap().validate().pass);
        prop_assert!(scale_action(&mu, &q(d)).unwrap().validate().pass);
        prop_assert!(pushforward_affine(&mu, &[(-1, q(s))]).unwrap().validate().pass);
    }
}
