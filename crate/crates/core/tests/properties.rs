use proptest::prelude::*;

use session_duality::check::{check_dual, check_equiv, pair_budget};
use session_duality::duality::{cdual, lm_dual, lmp_dual, mcdual_closed, mcl, naive_dual};
use session_duality::generate::{shrink, GenConfig, Generator};
use session_duality::semantics::{coidual, tree_dual_related, tree_equal, tree_of};
use session_duality::syntax::{alpha_eq, is_contractive, normalize, size, substitute, DeBruijn, SubstSeq};
use session_duality::{parse, print, TypeExpr, VarOcc};

fn generated(allow_neg_vars: bool) -> impl Strategy<Value = TypeExpr> {
    (any::<u64>(), 1usize..7).prop_map(move |(seed, max_depth)| {
        let cfg = GenConfig { seed, max_depth, allow_neg_vars, ..GenConfig::default() };
        Generator::new(cfg).unwrap().next_type()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip(t in generated(true)) {
        let back = parse(&print(&t)).unwrap();
        prop_assert!(alpha_eq(&back, &t));
        prop_assert_eq!(DeBruijn::of(&back), DeBruijn::of(&t));
    }

    #[test]
    fn positive_duals_agree(s in generated(false)) {
        let otf = mcdual_closed(&s).unwrap();
        prop_assert!(alpha_eq(&otf, &naive_dual(&mcl(&s).unwrap()).unwrap()));
        prop_assert!(alpha_eq(&otf, &cdual(&s).unwrap()));
        prop_assert!(alpha_eq(&lm_dual(&s).unwrap(), &lmp_dual(&s).unwrap()));
        prop_assert!(!cdual(&s).unwrap().has_neg_vars());
    }

    #[test]
    fn lm_dual_is_sound_and_involutive(s in generated(true)) {
        let d = lm_dual(&s).unwrap();
        prop_assert_eq!(size(&d), size(&s));
        prop_assert!(tree_equal(&coidual(&tree_of(&s).unwrap()), &tree_of(&d).unwrap()).verdict);
        prop_assert!(alpha_eq(&lm_dual(&d).unwrap(), &s));
    }

    #[test]
    fn checkers_match_trees(s in generated(true), u in generated(true)) {
        let (ts, tu) = (tree_of(&s).unwrap(), tree_of(&u).unwrap());
        let eq = check_equiv(&s, &u).unwrap();
        prop_assert_eq!(eq.verdict, tree_equal(&ts, &tu).verdict);
        prop_assert!(eq.pairs_explored <= pair_budget(&s, &u));
        let du = check_dual(&s, &u).unwrap();
        prop_assert_eq!(du.verdict, tree_dual_related(&ts, &tu).verdict);
        prop_assert!(du.pairs_explored <= pair_budget(&s, &u));
    }

    #[test]
    fn check_dual_accepts_lm_dual(s in generated(true)) {
        let d = lm_dual(&s).unwrap();
        prop_assert!(check_dual(&s, &d).unwrap().verdict);
        prop_assert!(check_dual(&d, &s).unwrap().verdict);
    }

    #[test]
    fn normalize_keeps_the_tree(s in generated(true)) {
        let n = normalize(&s).unwrap();
        prop_assert!(check_equiv(&n, &s).unwrap().verdict);
        prop_assert!(size(&n) <= size(&s));
    }

    #[test]
    fn shrink_candidates_are_smaller(s in generated(true)) {
        for u in shrink(&s) {
            prop_assert!(size(&u) < size(&s));
            prop_assert!(u.is_closed() && is_contractive(&u));
        }
    }

    #[test]
    fn substitution_of_closed_types_commutes_with_sequences(s in generated(false), u in generated(false)) {
        if let TypeExpr::Rec(x, body) = &s {
            let target = VarOcc::pos(x.clone());
            let direct = substitute(body, &target, &u);
            let seq = SubstSeq::empty().then(target, u.clone());
            prop_assert!(alpha_eq(&direct, &session_duality::syntax::apply_subst_seq(body, &seq)));
            prop_assert!(direct.is_closed());
        }
    }

    #[test]
    fn parser_never_panics(text in "[?!.()~ XYrecintd,]{0,24}") {
        let _ = parse(&text);
    }
}
