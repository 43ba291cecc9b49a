use adic_core::fpmod::FPModule;
use adic_core::ring::{gcd, in_radical};
use adic_core::towers::{limits_closed_form, limits_truncated, Lim1, LimValue, Tower};
use adic_core::{part_split, radical_compare, smith_normal_form, ExactMatrix, RadicalOrder, Ring, RingElement};
use proptest::prelude::*;

fn z(n: i64) -> RingElement {
    Ring::Integers.from_i64(n)
}

fn int_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(c).collect();
            ExactMatrix::from_i64_rows(Ring::Integers, &rows)
        })
    })
}

/// Nonzero products of powers of 2, 3 and 5.
fn smooth(max_exp: u32) -> impl Strategy<Value = i64> {
    (0..=max_exp, 0..=max_exp, 0..=max_exp).prop_map(|(a, b, c)| 2i64.pow(a) * 3i64.pow(b) * 5i64.pow(c))
}

/// Torsion modules on the primes 2 and 3 with exponents at most 3.
fn torsion_23() -> impl Strategy<Value = FPModule> {
    prop::collection::vec((0..=3u32, 0..=3u32), 0..=3).prop_map(|es| {
        let factors: Vec<RingElement> = es.iter().map(|&(a, b)| z(2i64.pow(a) * 3i64.pow(b))).collect();
        FPModule::from_cyclic(Ring::Integers, &factors)
    })
}

fn module(max_free: usize) -> impl Strategy<Value = FPModule> {
    (0..=max_free, prop::collection::vec(smooth(2), 0..=2)).prop_map(|(free, fs)| {
        let factors: Vec<RingElement> = fs.into_iter().map(z).collect();
        FPModule::from_invariants(Ring::Integers, free, &factors)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_identity_and_chain(a in int_matrix(5, 60)) {
        let r = smith_normal_form(&a);
        prop_assert_eq!(&(&r.u * &a) * &r.v, r.s.clone());
        prop_assert!(r.u.determinant().unwrap().is_unit());
        prop_assert!(r.v.determinant().unwrap().is_unit());
        prop_assert!(r.s.is_diagonal());
        let d = r.s.main_diagonal();
        for w in d.windows(2) {
            prop_assert!(w[1].is_divisible_by(&w[0]));
        }
        prop_assert!(d.iter().all(|e| e.is_normalized()));
    }

    #[test]
    fn transpose_keeps_invariant_factors(a in int_matrix(4, 30)) {
        // The nonzero invariant factors of A and A^T agree.
        let x = FPModule::new(a.clone());
        let y = FPModule::new(a.transpose());
        prop_assert_eq!(x.invariant_factors(), y.invariant_factors());
    }

    #[test]
    fn part_split_factors(d in smooth(3), g in smooth(2), unit in prop::sample::select(vec![1i64, -1])) {
        prop_assume!(g > 1);
        let (inside, outside) = part_split(&z(unit * d), &z(g)).unwrap();
        prop_assert_eq!(&inside * &outside, z(d));
        prop_assert!(gcd(&outside, &z(g)).is_unit());
        prop_assert!(in_radical(&z(g), &inside) || inside.is_unit());
    }

    #[test]
    fn radical_order_is_symmetric(a in smooth(2), b in smooth(2)) {
        let ab = radical_compare(&z(a), &z(b)).unwrap();
        let ba = radical_compare(&z(b), &z(a)).unwrap();
        let flipped = match ab {
            RadicalOrder::SupportOfAInB => RadicalOrder::SupportOfBInA,
            RadicalOrder::SupportOfBInA => RadicalOrder::SupportOfAInB,
            other => other,
        };
        prop_assert_eq!(ba, flipped);
        prop_assert_eq!(ab == RadicalOrder::Equal, radical_compare(&z(a * a), &z(b)).unwrap() == RadicalOrder::Equal);
    }

    #[test]
    fn limits_are_additive(m in module(2), n in module(2), x in smooth(1)) {
        let x = z(x);
        let sum = m.direct_sum(&n).unwrap();
        let whole = limits_closed_form(&Tower::multiplication(&sum, &x).unwrap()).unwrap();
        let a = limits_closed_form(&Tower::multiplication(&m, &x).unwrap()).unwrap();
        let b = limits_closed_form(&Tower::multiplication(&n, &x).unwrap()).unwrap();
        let (LimValue::Module(w), LimValue::Module(p), LimValue::Module(q)) = (&whole.lim, &a.lim, &b.lim) else {
            panic!("multiplication towers have finitely presented limits");
        };
        prop_assert!(w.is_isomorphic(&p.direct_sum(q).unwrap()));
        let nonzero = |l: &Lim1| matches!(l, Lim1::NonZero { .. });
        prop_assert_eq!(nonzero(&whole.lim1), nonzero(&a.lim1) || nonzero(&b.lim1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn torsion_towers_have_no_lim1(m in torsion_23(), x in prop::sample::select(vec![2i64, 3, 6, 4, 5])) {
        let tower = Tower::multiplication(&m, &z(x)).unwrap();
        let closed = limits_closed_form(&tower).unwrap();
        prop_assert_eq!(closed.lim1.clone(), Lim1::Zero);
        let oracle = limits_truncated(&tower, 8).unwrap();
        prop_assert!(oracle.stabilized);
        let LimValue::Module(lim) = &closed.lim else { panic!("finite limit expected") };
        prop_assert!(lim.is_isomorphic(&oracle.lim_approx));
    }
}
