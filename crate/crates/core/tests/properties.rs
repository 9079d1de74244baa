use borel_workbench::compactind::{CindElement, Hecke};
use borel_workbench::exactfield::Field;
use borel_workbench::fqweights::{TorusCharacter, Weight};
use borel_workbench::padicmat::{bruhat_side, iwasawa, vertex_normalize, BruhatSide, Mat2, PadicRational, SubgroupTag};
use borel_workbench::principalseries::{make_phi1, make_phi2};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

/// `p^e · n / d` with `p ∤ n d`, or zero.
fn scalar(p: u32, min_val: i64, allow_zero: bool) -> impl Strategy<Value = PadicRational> {
    (min_val..min_val + 4, -200i128..200, 1i128..200).prop_map(move |(e, n, d)| {
        let strip = |mut x: i128| {
            while x != 0 && x % p as i128 == 0 {
                x /= p as i128;
            }
            x
        };
        let n = strip(n);
        if n == 0 && allow_zero {
            return PadicRational::zero(p);
        }
        let n = if n == 0 { 1 } else { n };
        PadicRational::p_power(p, e) * PadicRational::new(p, n, strip(d))
    })
}

fn matrix(p: u32) -> impl Strategy<Value = Mat2> {
    (scalar(p, -2, true), scalar(p, -2, true), scalar(p, -2, true), scalar(p, -2, true))
        .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
        .prop_filter("invertible", |g| !g.det().is_zero())
}

fn letters(p: u32) -> Vec<Mat2> {
    let q = |x| PadicRational::from_int(p, x);
    vec![
        Mat2::s(p),
        Mat2::t(p),
        Mat2::pi(p),
        Mat2::upper(q(1)),
        Mat2::upper(PadicRational::new(p, 1, p as i128)),
        Mat2::lower(q(1)),
        Mat2::lower(q(p as i128)),
        Mat2::diag(q(-1), q(1)),
    ]
}

fn word(p: u32, max_len: usize) -> impl Strategy<Value = Mat2> {
    let l = letters(p);
    prop::collection::vec(0..l.len(), 1..=max_len)
        .prop_map(move |idx| idx.iter().fold(Mat2::identity(p), |acc, &i| acc * l[i]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn field_axioms(k in 1usize..=2, p in prime(), a in 0u64..625, b in 0u64..625, c in 0u64..625) {
        let f = Field::with_degree(p, k).unwrap();
        let q = f.order();
        let (a, b, c) = (f.from_code(a % q), f.from_code(b % q), f.from_code(c % q));
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a + f.zero(), a);
        prop_assert_eq!(a - a, f.zero());
        if !a.is_zero() {
            prop_assert!((a * a.inv()).is_one());
            prop_assert_eq!(a.pow(q - 1), f.one());
        }
    }

    #[test]
    fn trix((p, beta) in prime().prop_flat_map(|p| (Just(p), scalar(p, -3, false)))) {
        let binv = beta.inv().unwrap();
        let lhs = Mat2::s(p) * Mat2::upper(beta);
        let rhs = Mat2::new(-binv, PadicRational::one(p), PadicRational::zero(p), beta) * Mat2::lower(binv);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_through_the_borel(
        (p, alpha, beta) in prime().prop_flat_map(|p| (Just(p), scalar(p, 0, true), scalar(p, 1, true)))
    ) {
        let c = PadicRational::one(p) + alpha * beta;
        prop_assert!(c.is_unit());
        let cinv = c.inv().unwrap();
        let lhs = Mat2::lower(beta) * Mat2::upper(alpha);
        let rhs = Mat2::upper(alpha * cinv) * Mat2::new(cinv, PadicRational::zero(p), beta, c);
        prop_assert_eq!(lhs, rhs);
        let t = Mat2::t(p);
        let pp = PadicRational::from_int(p, p as i128);
        prop_assert_eq!(t.inverse().unwrap() * Mat2::lower(beta) * t, Mat2::lower(pp * beta));
    }

    #[test]
    fn decompositions_recombine((p, g) in prime().prop_flat_map(|p| (Just(p), matrix(p)))) {
        let (b, k) = iwasawa(&g).unwrap();
        prop_assert!(b.in_subgroup(SubgroupTag::P) && k.in_subgroup(SubgroupTag::K));
        prop_assert_eq!(b * k, g);
        let (side, b, u) = bruhat_side(&g).unwrap();
        prop_assert!(b.in_subgroup(SubgroupTag::P) && u.in_subgroup(SubgroupTag::I1));
        let back = match side {
            BruhatSide::PI1 => b * u,
            BruhatSide::PsI1 => b * Mat2::s(p) * u,
        };
        prop_assert_eq!(back, g);
        let (v, kz) = vertex_normalize(&g);
        prop_assert_eq!(v.matrix() * kz, g);
        prop_assert!(kz.strip_center().1.in_subgroup(SubgroupTag::K));
    }

    #[test]
    fn subgroup_chain(
        p in prime(),
        entries in (-50i128..50, -50i128..50, -50i128..50, -50i128..50),
    ) {
        let (a, b, c, d) = entries;
        let pp = p as i128;
        let q = |x| PadicRational::from_int(p, x);
        let k1 = Mat2::new(q(1 + pp * a), q(pp * b), q(pp * c), q(1 + pp * d));
        let i1 = Mat2::new(q(1 + pp * a), q(b), q(pp * c), q(1 + pp * d));
        prop_assert!(k1.in_subgroup(SubgroupTag::K1));
        for g in [k1, i1] {
            prop_assert!(g.in_subgroup(SubgroupTag::I1));
            prop_assert!(g.in_subgroup(SubgroupTag::I));
            prop_assert!(g.in_subgroup(SubgroupTag::K));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn actions_compose(
        (p, g, h) in prop::sample::select(vec![2u32, 3]).prop_flat_map(|p| (Just(p), word(p, 2), word(p, 2))),
        r in 0u32..3,
    ) {
        let f = Field::prime(p).unwrap();
        let w = Weight::new(f, r.min(p - 1), 0).unwrap();
        let phi = CindElement::phi(w).unwrap();
        prop_assert_eq!(phi.act(&g).act(&h), phi.act(&(h * g)));

        let hecke = Hecke::new(w).unwrap();
        let x = phi.act(&g);
        prop_assert_eq!(hecke.apply(&x.act(&h)), hecke.apply(&x).act(&h));

        let chi = TorusCharacter::new(f, 0, 0, f.one(), f.one()).unwrap();
        for v in [make_phi1(&chi), make_phi2(&chi)] {
            let lhs = v.act(&g, 8).unwrap().act(&h, 8).unwrap();
            prop_assert_eq!(lhs, v.act(&(h * g), 8).unwrap());
        }
    }
}
