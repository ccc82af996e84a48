use proptest::prelude::*;

use gainforge::graph::GainGraph;
use gainforge::io::{parse_gaingraph, parse_lines, serialize_gaingraph, serialize_lines};
use gainforge::lines::{dismantle, mub_c3, mub_c3_bases, tightness_check};
use gainforge::search::objective_two_ev;
use gainforge::switching::{normalize_spanning_tree, switching_equivalent};
use gainforge::{certify_two_ev, eigenvalues, UnitGain};

fn gain() -> impl Strategy<Value = UnitGain> {
    prop_oneof![
        (0i64..24, prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 12, 24])).prop_map(|(p, q)| UnitGain::root(p, q)),
        (0.0..std::f64::consts::TAU).prop_map(UnitGain::from_angle),
    ]
}

/// Connected gain graph: a random spanning path plus random extra edges.
fn gain_graph() -> impl Strategy<Value = GainGraph> {
    (3usize..8).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 2..n).map(move |v| (u, v))).collect();
        let extra = pairs.len();
        (
            Just(n),
            Just(pairs),
            prop::collection::vec(any::<bool>(), extra),
            prop::collection::vec(gain(), n * n),
        )
    })
    .prop_map(|(n, pairs, keep, gains)| {
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|u| (u, u + 1)).collect();
        edges.extend(pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e));
        GainGraph::build(n, edges.into_iter().enumerate().map(|(i, (u, v))| (u, v, gains[i]))).unwrap()
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn spectra_close(a: &GainGraph, b: &GainGraph) -> bool {
    let (sa, sb) = (eigenvalues(a, 1e-12).unwrap(), eigenvalues(b, 1e-12).unwrap());
    sa.eigenvalues.iter().zip(&sb.eigenvalues).all(|(x, y)| (x - y).abs() <= 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn switch_relabel_converse_keep_spectrum(
        (g, perm, d) in gain_graph().prop_flat_map(|g| {
            let n = g.n();
            (Just(g), permutation(n), prop::collection::vec(gain(), n))
        }),
        conj in any::<bool>(),
    ) {
        let mut h = g.relabel(&perm).unwrap().switch(&d).unwrap();
        if conj {
            h = h.converse();
        }
        prop_assert!(spectra_close(&g, &h));
    }

    #[test]
    fn normalisation_is_idempotent(g in gain_graph()) {
        let (once, _) = normalize_spanning_tree(&g).unwrap();
        let (twice, w) = normalize_spanning_tree(&once).unwrap();
        prop_assert!(once.approx_eq(&twice, 1e-12));
        prop_assert!(w.diagonal.iter().all(|x| x.approx_eq(UnitGain::ONE, 1e-12)));
        prop_assert!(switching_equivalent(&g, &once).unwrap().is_some());
    }

    #[test]
    fn cycle_gains_survive_switching(
        (g, d) in gain_graph().prop_flat_map(|g| {
            let n = g.n();
            (Just(g), prop::collection::vec(gain(), n))
        }),
    ) {
        let h = g.switch(&d).unwrap();
        for u in 0..g.n() {
            for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
                for &w in g.neighbors(v).iter().filter(|&&w| w > v && g.is_adjacent(w, u)) {
                    let (a, b) = (g.cycle_gain(&[u, v, w]).unwrap(), h.cycle_gain(&[u, v, w]).unwrap());
                    prop_assert!(a.approx_eq(b, 1e-9));
                }
            }
        }
    }

    #[test]
    fn gaingraph_text_round_trip(g in gain_graph()) {
        let back = parse_gaingraph(&serialize_gaingraph(&g)).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert!(back.approx_eq(&g, 1e-15));
        let exact_kept = g.edges().zip(back.edges()).all(|((.., a), (.., b))| a.is_exact() == b.is_exact());
        prop_assert!(exact_kept);
    }

    #[test]
    fn two_ev_objective_is_switching_invariant(d in prop::collection::vec(gain(), 8)) {
        let w4 = gainforge::weighing::named_weighing("W4", None).unwrap().as_gain_graph().unwrap();
        let g = gainforge::families::double(&w4, gainforge::families::DoubleKind::Nd).unwrap();
        let h = g.switch(&d).unwrap();
        prop_assert!(objective_two_ev(&h.matrix()).unwrap() < 1e-9);
        prop_assert!(certify_two_ev(&h, 1e-9).unwrap().is_some());
    }

    #[test]
    fn mub_dismantling_is_additive(order in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(), t in 2usize..=4) {
        let lines = mub_c3(4).unwrap();
        let bases = mub_c3_bases(4);
        let chosen: Vec<usize> = order.iter().take(t).flat_map(|&b| bases[b].clone()).collect();
        let sub = lines.select(&chosen);
        let partition: Vec<Vec<usize>> = (0..t).map(|i| (3 * i..3 * i + 3).collect()).collect();
        let d = dismantle(&sub, &partition, 1.0 / 3f64.sqrt()).unwrap();
        prop_assert!(d.additivity_residual <= 1e-9);
        let whole = tightness_check(&sub);
        prop_assert!(whole.is_tight && (whole.z - t as f64).abs() <= 1e-9);
        let parts_z: f64 = d.parts.iter().map(|p| p.z).sum();
        prop_assert!((parts_z - whole.z).abs() <= 1e-9);
    }
}

#[test]
fn lines_text_round_trip() {
    let lines = mub_c3(3).unwrap();
    let back = parse_lines(&serialize_lines(&lines)).unwrap();
    assert_eq!((back.dim(), back.count()), (3, 9));
    assert!(back.vectors().sub(lines.vectors()).max_abs() <= 1e-15);
}
