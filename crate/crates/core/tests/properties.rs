use extremal_density::density::{class_fractions, t_density};
use extremal_density::graph::{
    automorphism_count, canonical_form, independence_number, parse_graph6, write_graph6,
};
use extremal_density::oracle::{hom_count, injective_count, BitGraph};
use extremal_density::weighting::{enumerate_weightings, fractional_independence_number, spectrum};
use extremal_density::Graph;
use num_rational::Rational64;
use proptest::prelude::*;

/// Random graph on `1..=max_v` vertices.
fn any_graph(max_v: usize) -> impl Strategy<Value = Graph> {
    (1..=max_v).prop_flat_map(|v| {
        let pairs = v * (v - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::empty(v).unwrap();
            let mut k = 0;
            for w in 1..v {
                for u in 0..w {
                    if bits[k] {
                        g.add_edge(u, w).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn without_isolated(max_v: usize) -> impl Strategy<Value = Graph> {
    any_graph(max_v).prop_filter("isolated vertex", |g| g.order() >= 2 && !g.has_isolated_vertices())
}

fn any_permutation(g: Graph) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    let v = g.order();
    Just((0..v).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |p| (g.clone(), p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graph6_round_trip(g in any_graph(16)) {
        prop_assert_eq!(parse_graph6(&write_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_round_trip(g in any_graph(16)) {
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn relabelling_preserves_invariants((g, p) in any_graph(8).prop_flat_map(any_permutation)) {
        let h = g.relabel(&p);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert_eq!(independence_number(&g), independence_number(&h));
        prop_assert_eq!(fractional_independence_number(&g), fractional_independence_number(&h));
        prop_assert_eq!(automorphism_count(&g).unwrap(), automorphism_count(&h).unwrap());
    }

    #[test]
    fn automorphisms_divide_factorial(g in any_graph(8)) {
        let fact: u64 = (1..=g.order() as u64).product();
        prop_assert_eq!(fact % automorphism_count(&g).unwrap(), 0);
    }

    #[test]
    fn weightings_are_valid_and_bounded(g in without_isolated(7)) {
        let s = spectrum(&g).unwrap();
        let v = g.order();
        let ws = enumerate_weightings(&g);
        prop_assert!(ws.iter().all(|w| w.is_valid_for(&g)));
        prop_assert_eq!(s.total_weightings(), ws.len() as u64);
        prop_assert!(s.alpha_star >= Rational64::from(s.alpha as i64));
        prop_assert!(s.alpha_star_halves() >= v);
        let star = s.alpha_star_halves();
        // r + y/2 >= v - alpha*, equality exactly at maximum total
        for e in &s.entries {
            let lhs = 2 * e.r + e.y;
            prop_assert!(lhs + star >= 2 * v);
            prop_assert_eq!(lhs + star == 2 * v, e.y + 2 * e.b == star);
        }
        prop_assert!(s.entries.windows(2).all(|w| (w[0].r, w[0].y, w[0].b) < (w[1].r, w[1].y, w[1].b)));
    }

    #[test]
    fn injective_bounded_by_hom_and_divisible(p in without_isolated(5), h in any_graph(9)) {
        let bg = BitGraph::from(&h);
        let inj = injective_count(&p, &bg).unwrap();
        prop_assert!(hom_count(&p, &bg).unwrap() >= inj);
        prop_assert_eq!(inj % automorphism_count(&p).unwrap() as u128, 0);
    }

    #[test]
    fn fractions_identities(beta in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let f = class_fractions(beta, q).unwrap();
        prop_assert!(f.y >= 0.0 && f.r >= 0.0 && f.b >= 0.0);
        prop_assert!((f.y + f.r + f.b - 1.0).abs() <= 1e-12);
        let density = f.y * f.y + f.r * f.r + 2.0 * f.r * (f.y + f.b);
        prop_assert!((density - beta).abs() <= 1e-12);
    }

    #[test]
    fn density_grows_with_beta(g in without_isolated(5), q in 0.0f64..=1.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let s = spectrum(&g).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (tl, th) = (t_density(&s, lo, q).unwrap(), t_density(&s, hi, q).unwrap());
        prop_assert!(tl <= th * (1.0 + 1e-12), "{} > {}", tl, th);
    }
}
