use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use picard::chgeometry::{GeoCoord, HoroCoord, ProjPoint};
use picard::cyclotomic::CycNum;
use picard::matgroup::{eval_word, named, upsilon, GroupWord, Perm};
use picard::polyaction::{act_pu21, monomials, substitute, x_vars, HomPoly, LinearSub};
use picard::thetaforms::{period_matrix, random_interior_points, BallCoord};

fn cyc() -> impl Strategy<Value = CycNum> {
    (prop::array::uniform4(-6i64..=6), 1i64..=4).prop_map(|(c, d)| {
        let mut x = CycNum::from_ints(c);
        x = &x * &CycNum::frac(1, d);
        x
    })
}

fn word(letters: &'static [&'static str], max: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..letters.len(), prop_oneof![Just(1i64), Just(-1), Just(2)]), 0..max)
        .prop_map(move |v| GroupWord {
            letters: v.into_iter().map(|(i, e)| (letters[i].to_string(), e)).collect(),
        })
}

fn poly3(degree: u32) -> impl Strategy<Value = HomPoly> {
    let n = monomials(3, degree).len();
    prop::collection::vec(-3i64..=3, n).prop_map(move |cs| {
        let vars = x_vars(3);
        let mut p = HomPoly::zero(&vars, degree);
        for (e, c) in monomials(3, degree).into_iter().zip(cs) {
            if c != 0 {
                p.add_term(e, CycNum::from_int(c));
            }
        }
        p
    })
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn field_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism(a in cyc(), b in cyc()) {
        let ea: Complex64 = a.embed();
        let eb: Complex64 = b.embed();
        prop_assert!(close((&a * &b).embed(), ea * eb, 1e-12));
        prop_assert!(close((&a + &b).embed(), ea + eb, 1e-12));
        prop_assert!(close(a.conj().embed(), ea.conj(), 1e-12));
    }

    #[test]
    fn text_round_trip(a in cyc()) {
        let back: CycNum = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn perm_group_laws(i in 0usize..24, j in 0usize..24, k in 0usize..24) {
        let all = Perm::all();
        let (a, b, c) = (all[i], all[j], all[k]);
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&a.inverse()), Perm::identity());
    }

    #[test]
    fn upsilon_is_multiplicative(u in word(&["R1", "R2", "R3"], 6), v in word(&["R1", "R2", "R3"], 6)) {
        let uv = GroupWord { letters: u.letters.iter().chain(&v.letters).cloned().collect() };
        prop_assert_eq!(upsilon(&uv).unwrap(), upsilon(&u).unwrap().compose(&upsilon(&v).unwrap()));
        prop_assert_eq!(upsilon(&u.inverse()).unwrap(), upsilon(&u).unwrap().inverse());
    }

    #[test]
    fn words_preserve_the_form(w in word(&["R", "P", "R1", "R2", "R3"], 5)) {
        let g = eval_word(&w).unwrap();
        prop_assert!(g.pu21_member());
        let winv = eval_word(&w.inverse()).unwrap();
        prop_assert!(g.mul(&winv).is_proj_identity());
    }

    #[test]
    fn substitutions_compose(p in poly3(3), a in prop::array::uniform9(-2i64..=2), b in prop::array::uniform9(-2i64..=2)) {
        let sa = LinearSub::from_ints(&[&a[0..3], &a[3..6], &a[6..9]]);
        let sb = LinearSub::from_ints(&[&b[0..3], &b[3..6], &b[6..9]]);
        let lhs = substitute(&substitute(&p, &sa).unwrap(), &sb).unwrap();
        let rhs = substitute(&p, &sa.then(&sb)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn pu21_action_composes(p in poly3(3), u in word(&["R", "P", "R1"], 3), v in word(&["R", "P", "R1"], 3)) {
        let (g, h) = (eval_word(&u).unwrap(), eval_word(&v).unwrap());
        let k = 2;
        let lhs = act_pu21(&h, &act_pu21(&g, &p, k).unwrap(), k).unwrap();
        let rhs = act_pu21(&g.mul(&h), &p, k).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn isometries_preserve_the_ball(seed in any::<u64>(), w in word(&["R", "P", "R1", "R2", "R3"], 4)) {
        let g = eval_word(&w).unwrap();
        for p in random_interior_points(seed, 4) {
            let q = ProjPoint::from_ball(&p);
            let before = q.form_value() / q.v[2].norm_sqr();
            let img = q.apply(&g);
            let after = img.form_value() / img.v[2].norm_sqr().max(1e-300);
            prop_assert!(before < 0.0);
            prop_assert!(img.form_value() < 0.0, "{} -> {}", before, after);
        }
    }

    #[test]
    fn horospherical_round_trip(re in -2.0f64..2.0, im in -2.0f64..2.0, t in -3.0f64..3.0, u in 0.01f64..5.0) {
        let h = HoroCoord::new(Complex64::new(re, im), t, u);
        let back = HoroCoord::from_proj(&h.to_proj()).unwrap();
        prop_assert!(close(back.a, h.a, 1e-12));
        prop_assert!((back.t - t).abs() < 1e-11 && (back.u - u).abs() < 1e-11);
    }

    #[test]
    fn r_reflects_theta(theta in -1.5f64..1.5, alpha in -1.5f64..1.5, s in 0.0f64..1.0) {
        let rmax = (2.0 * theta.cos()).sqrt();
        let g = GeoCoord::new(s * rmax, theta, alpha);
        let img = ProjPoint::from_ball(&g.to_ball()).apply(&named("R").unwrap()).to_ball().unwrap();
        let back = GeoCoord::from_ball(&img, 1e-12).unwrap();
        prop_assert!((back.theta + theta).abs() < 1e-12);
        prop_assert!((back.r - g.r).abs() < 1e-12 || g.r.abs() < 1e-12);
        if g.r.abs() > 1e-9 {
            prop_assert!((back.alpha - alpha).abs() < 1e-12);
        }
    }

    #[test]
    fn period_matrix_is_siegel(seed in any::<u64>()) {
        for p in random_interior_points(seed, 3) {
            let s = period_matrix(&p).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(s.omega[i][j], s.omega[j][i]);
                }
            }
            prop_assert!(s.im_eigenvalues[0] > 0.0);
        }
    }
}

#[test]
fn boundary_has_no_period_matrix() {
    assert!(period_matrix(&BallCoord::new(Complex64::zero(), Complex64::zero())).is_err());
    assert!(CycNum::one().inv().unwrap().is_one());
}
