use std::collections::BTreeSet;

use ksparity::exactalg::{ExactMatrix, PauliOperator};
use ksparity::incidence::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every labelled cubic graph on `n` vertices, each exactly once.
fn labelled_cubic_graphs(n: usize) -> Vec<SimpleGraph> {
    fn rec(g: &mut SimpleGraph, out: &mut Vec<SimpleGraph>) {
        let n = g.vertex_count();
        let Some(v) = (0..n).find(|&v| g.degree(v) < 3) else {
            out.push(g.clone());
            return;
        };
        let floor = g.neighbors(v).iter().copied().filter(|&w| w > v).max().unwrap_or(v);
        for w in floor + 1..n {
            if g.degree(w) < 3 && !g.has_edge(v, w) {
                let mut h = g.clone();
                h.add_edge(v, w);
                rec(&mut h, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut SimpleGraph::new(n), &mut out);
    out
}

/// Random connected cubic graph by rejection from random stub matchings.
fn random_cubic(n: usize, rng: &mut ChaCha8Rng) -> SimpleGraph {
    'retry: loop {
        let mut stubs: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
        stubs.shuffle(rng);
        let mut g = SimpleGraph::new(n);
        for pair in stubs.chunks(2) {
            if pair[0] == pair[1] || g.has_edge(pair[0], pair[1]) {
                continue 'retry;
            }
            g.add_edge(pair[0], pair[1]);
        }
        if g.is_connected() {
            return g;
        }
    }
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Isomorphism by trying every vertex bijection.
fn brute_isomorphic(a: &SimpleGraph, b: &SimpleGraph) -> bool {
    fn rec(a: &SimpleGraph, b: &SimpleGraph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let v = map.len();
        if v == a.vertex_count() {
            return true;
        }
        for w in 0..b.vertex_count() {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            if (0..v).all(|u| a.has_edge(u, v) == b.has_edge(map[u], w)) {
                map.push(w);
                used[w] = true;
                if rec(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    a.vertex_count() == b.vertex_count() && rec(a, b, &mut Vec::new(), &mut vec![false; b.vertex_count()])
}

/// Planarity of a connected cubic graph via Euler's formula over all
/// rotation systems.
fn is_planar_cubic(g: &SimpleGraph) -> bool {
    let n = g.vertex_count();
    let e = g.edges().len();
    (0u32..1 << n).any(|flips| {
        let rot: Vec<[usize; 3]> = (0..n)
            .map(|v| {
                let nb = g.neighbors(v);
                if flips >> v & 1 == 1 {
                    [nb[0], nb[2], nb[1]]
                } else {
                    [nb[0], nb[1], nb[2]]
                }
            })
            .collect();
        let next = |u: usize, v: usize| {
            let k = rot[v].iter().position(|&x| x == u).unwrap();
            (v, rot[v][(k + 1) % 3])
        };
        let mut seen = BTreeSet::new();
        let mut faces = 0;
        for u in 0..n {
            for &v in g.neighbors(u) {
                if seen.contains(&(u, v)) {
                    continue;
                }
                faces += 1;
                let mut d = (u, v);
                while seen.insert(d) {
                    d = next(d.0, d.1);
                }
            }
        }
        n + faces == e + 2
    })
}

#[test]
fn labelled_enumerator_matches_known_counts() {
    assert_eq!(labelled_cubic_graphs(4).len(), 1);
    assert_eq!(labelled_cubic_graphs(6).len(), 70);
    assert_eq!(labelled_cubic_graphs(8).len(), 19355);
}

#[test]
fn census_matches_exhaustive_labelled_enumeration() {
    for n in [4, 6, 8] {
        let oracle: BTreeSet<u128> =
            labelled_cubic_graphs(n).iter().filter(|g| g.is_connected()).map(SimpleGraph::canonical_code).collect();
        let ours: BTreeSet<u128> = connected_cubic_graphs(n).unwrap().iter().map(SimpleGraph::canonical_code).collect();
        assert_eq!(ours, oracle, "n = {n}");
    }
}

#[test]
fn census_counts() {
    for (n, count) in [(4, 1), (6, 2), (8, 5), (10, 19), (12, 85)] {
        let graphs = connected_cubic_graphs(n).unwrap();
        assert_eq!(graphs.len(), count, "n = {n}");
        assert!(graphs.iter().all(|g| g.is_cubic() && g.is_connected()));
        assert_eq!(generate_cubic_structures(n).unwrap().len(), count);
    }
    assert!(generate_cubic_structures(7).is_err());
    assert!(generate_cubic_structures(14).is_err());
}

#[test]
fn census_classes_are_pairwise_non_isomorphic() {
    for n in [6, 8] {
        let gs = connected_cubic_graphs(n).unwrap();
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                assert!(!brute_isomorphic(&gs[i], &gs[j]), "n = {n}: {i} ~ {j}");
            }
        }
    }
}

#[test]
fn random_ten_vertex_graphs_land_in_the_census() {
    let codes: BTreeSet<u128> = connected_cubic_graphs(10).unwrap().iter().map(SimpleGraph::canonical_code).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut hit = BTreeSet::new();
    for _ in 0..3000 {
        let c = random_cubic(10, &mut rng).canonical_code();
        assert!(codes.contains(&c));
        hit.insert(c);
    }
    assert!(hit.len() >= 15, "only {} classes sampled", hit.len());
}

#[test]
fn graph6_round_trip_of_the_eight_vertex_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let gs = connected_cubic_graphs(8).unwrap();
    let text: String = gs.iter().map(|g| g.relabel(&random_perm(8, &mut rng)).to_graph6() + "\n").collect();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cubic8.g6");
    std::fs::write(&path, format!(">>graph6<<{text}")).unwrap();
    let recs = load_graph6(&path).unwrap();
    assert_eq!(recs.len(), 5);
    let expected = generate_cubic_structures(8).unwrap();
    for (r, g) in recs.iter().zip(&gs) {
        assert!(r.graph.is_isomorphic(g));
        let s = r.structure.as_ref().unwrap();
        assert_eq!((s.point_count(), s.block_count()), (12, 8));
    }
    let ours: BTreeSet<u128> = recs.iter().map(|r| r.graph.canonical_code()).collect();
    let theirs: BTreeSet<u128> = gs.iter().map(SimpleGraph::canonical_code).collect();
    assert_eq!(ours, theirs);
    assert_eq!(expected.len(), recs.len());
}

#[test]
fn k4_in_graph6_is_the_pasch_configuration() {
    let recs = parse_graph6("C~\n").unwrap();
    assert_eq!(recs[0].structure.as_ref().unwrap(), &IncidenceStructure::pasch());
}

fn parity_of_block(ga: &GeneratorAssignment, b: &[usize]) -> Vec<bool> {
    let mut odd = vec![false; ga.generator_count()];
    for &p in b {
        for &g in ga.word(p) {
            odd[usize::from(g)] ^= true;
        }
    }
    odd
}

#[test]
fn forcing_blocks_have_even_generator_multiplicities() {
    let mut unforced_odd = 0;
    for n in [4, 6, 8, 10] {
        for inc in generate_cubic_structures(n).unwrap() {
            let ga = assign_generators(&inc);
            let forcing: BTreeSet<usize> = (0..inc.point_count()).filter_map(|p| ga.forcing_block(p)).collect();
            for (k, b) in inc.blocks().iter().enumerate() {
                let even = parity_of_block(&ga, b).iter().all(|&o| !o);
                if forcing.contains(&k) {
                    assert!(even, "n = {n}, block {k}");
                } else if !even {
                    unforced_odd += 1;
                }
            }
            for p in 0..inc.point_count() {
                assert_eq!(ga.forcing_block(p).is_none(), ga.generator_points().contains(&p));
            }
        }
    }
    // A block closed by a point that another block forced carries a sign of
    // its own and adds no relation; its letters need not pair up.
    assert!(unforced_odd > 0);
}

fn mermin() -> Vec<PauliOperator> {
    ["XI", "IX", "IY", "YI"].iter().map(|s| PauliOperator::parse(s).unwrap()).collect()
}

#[test]
fn pasch_and_prism_admit_no_proof() {
    let prism = generate_cubic_structures(6).unwrap().into_iter().find(|s| {
        let ga = assign_generators(s);
        let sys = knuth_bendix(&ga, s, &[], &QUICK_LIMITS);
        sys.reduce(&product_word(&ga, s)).is_empty()
    });
    for inc in [IncidenceStructure::pasch(), prism.expect("one six-vertex structure is trivial")] {
        let d = decide_structure(&inc, 2).unwrap();
        assert_eq!(d.verdict, Verdict::NoProofPossible);
        assert_eq!(d.rewrite_status, RewriteStatus::Complete);
        assert!(d.normal_form.is_empty());
    }
}

#[test]
fn grid_yields_a_mermin_type_proof() {
    let grid = IncidenceStructure::grid();
    let ga = assign_generators(&grid);
    let mermin_ok = check_pauli_assignment(&grid, &ga, &mermin()).expect("Mermin's choice is a proof");
    assert_eq!(mermin_ok.points.len(), 9);

    let d = decide_structure(&grid, 2).unwrap();
    assert!(!d.normal_form.is_empty());
    let Verdict::ProofFound(a) = &d.verdict else { panic!("{:?}", d.verdict) };
    let pattern = |gens: &[PauliOperator]| -> Vec<bool> {
        (0..gens.len())
            .flat_map(|i| (0..gens.len()).map(move |j| (i, j)))
            .map(|(i, j)| gens[i].commutes(&gens[j]))
            .collect()
    };
    assert_eq!(pattern(&a.generators), pattern(&mermin()));
    assert!(check_pauli_assignment(&grid, &ga, &a.generators).is_some());

    let report = serde_json::to_value(d.report(&grid)).unwrap();
    assert_eq!(report["verdict"], "ProofFound");
    assert_eq!(report["generators"].as_array().unwrap().len(), 4);
    assert!(report["generators"][0]["x"].is_string());
}

#[test]
fn commuting_generators_are_not_a_proof() {
    let grid = IncidenceStructure::grid();
    let ga = assign_generators(&grid);
    let gens: Vec<PauliOperator> = ["XI", "IX", "IX", "XI"].iter().map(|s| PauliOperator::parse(s).unwrap()).collect();
    assert!(check_pauli_assignment(&grid, &ga, &gens).is_none());
    assert!(check_pauli_assignment(&grid, &ga, &mermin()[..3]).is_none());
}

#[test]
fn table_of_cubic_structures() {
    for (n, producing, not) in [(4, 0, 1), (6, 1, 1), (8, 2, 3), (10, 10, 9)] {
        let graphs = connected_cubic_graphs(n).unwrap();
        let (mut yes, mut no) = (0, 0);
        for g in &graphs {
            let inc = IncidenceStructure::from_cubic_graph(g).unwrap();
            let d = decide_structure(&inc, 2).unwrap();
            match &d.verdict {
                Verdict::ProofFound(a) => {
                    yes += 1;
                    assert!(check_pauli_assignment(&inc, &d.assignment, &a.generators).is_some());
                    assert!(!is_planar_cubic(g));
                }
                Verdict::NoProofPossible => {
                    no += 1;
                    assert!(is_planar_cubic(g));
                    assert_eq!(d.rewrite_status, RewriteStatus::Complete);
                    let limits = CompletionLimits { order: d.rewrite_order, ..QUICK_LIMITS };
                    let sys = knuth_bendix(&d.assignment, &inc, &[], &limits);
                    assert!(sys.verify_local_confluence());
                    for (a, b) in relations(&d.assignment, &inc, &[]) {
                        assert!(sys.joins(&a, &b));
                    }
                    assert!(sys.reduce(&product_word(&d.assignment, &inc)).is_empty());
                }
                Verdict::Inconclusive(why) => panic!("n = {n}: {why}"),
            }
        }
        assert_eq!((yes, no), (producing, not), "n = {n}");
    }
}

#[test]
fn trivial_products_survive_exhaustive_search() {
    for n in [4, 6, 8, 10] {
        for inc in generate_cubic_structures(n).unwrap() {
            let ga = assign_generators(&inc);
            let sys = knuth_bendix(&ga, &inc, &[], &QUICK_LIMITS);
            if !sys.reduce(&product_word(&ga, &inc)).is_empty() {
                continue;
            }
            let out = search_pauli_assignment(&inc, &ga, &SearchOptions::new(2));
            assert!(matches!(out, SearchOutcome::Exhausted(_)), "n = {n}: {out:?}");
        }
    }
}

#[test]
fn three_qubit_search_also_fails_on_small_trivial_structures() {
    let inc = IncidenceStructure::pasch();
    let ga = assign_generators(&inc);
    let out = search_pauli_assignment(&inc, &ga, &SearchOptions::new(3));
    assert!(matches!(out, SearchOutcome::Exhausted(_)));
}

fn word_matrix(w: &[u16], gens: &[ExactMatrix]) -> ExactMatrix {
    w.iter().fold(ExactMatrix::identity(gens[0].dim()), |acc, &g| acc.mul(&gens[usize::from(g)]))
}

#[test]
fn rewriting_preserves_matrices_on_the_grid() {
    let grid = IncidenceStructure::grid();
    let ga = assign_generators(&grid);
    let gens: Vec<ExactMatrix> = mermin().iter().map(PauliOperator::to_matrix).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for order in ORDER_PORTFOLIO {
        let sys = knuth_bendix(&ga, &grid, &[], &CompletionLimits { order, ..Default::default() });
        assert!(sys.is_complete(), "{order:?}");
        for _ in 0..300 {
            let len = rand::Rng::gen_range(&mut rng, 0..24);
            let w: Vec<u16> = (0..len).map(|_| rand::Rng::gen_range(&mut rng, 0..4u16)).collect();
            let c = sys.reduce(&w);
            assert_eq!(word_matrix(&w, &gens), word_matrix(&c, &gens), "{w:?} -> {c:?}");
            assert_eq!(sys.reduce(&c), c);
        }
    }
}

fn arb_word(g: u16, max: usize) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0..g, 0..max)
}

proptest! {
    #[test]
    fn recursive_orders_are_reduction_orders(
        a in arb_word(4, 8), b in arb_word(4, 8), x in arb_word(4, 4), y in arb_word(4, 4),
    ) {
        for order in ORDER_PORTFOLIO {
            let ab = order.cmp(&a, &b);
            prop_assert_eq!(ab, order.cmp(&b, &a).reverse());
            prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
            let xa = [&x[..], &a[..], &y[..]].concat();
            let xb = [&x[..], &b[..], &y[..]].concat();
            prop_assert_eq!(order.cmp(&xa, &xb), ab);
            if !x.is_empty() || !y.is_empty() {
                prop_assert_eq!(order.cmp(&xa, &a), std::cmp::Ordering::Greater);
            }
        }
    }

    #[test]
    fn recursive_order_is_transitive(a in arb_word(3, 6), b in arb_word(3, 6), c in arb_word(3, 6)) {
        let mut v = [a, b, c];
        v.sort_by(|p, q| WordOrder::Recursive.cmp(p, q));
        prop_assert_ne!(WordOrder::Recursive.cmp(&v[0], &v[2]), std::cmp::Ordering::Greater);
    }

    #[test]
    fn canonical_code_ignores_labels(seed in any::<u64>(), half in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_cubic(2 * half, &mut rng);
        let h = g.relabel(&random_perm(2 * half, &mut rng));
        prop_assert_eq!(g.canonical_code(), h.canonical_code());
        prop_assert!(g.canonical_form() == h.canonical_form());
        prop_assert!(g.is_isomorphic(&h));
    }

    #[test]
    fn graph6_round_trips(seed in any::<u64>(), half in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_cubic(2 * half, &mut rng);
        let back = SimpleGraph::from_graph6(&g.to_graph6()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn structure_json_round_trips(seed in any::<u64>(), half in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inc = IncidenceStructure::from_cubic_graph(&random_cubic(2 * half, &mut rng)).unwrap();
        prop_assert_eq!(IncidenceStructure::from_json(&inc.to_json()).unwrap(), inc);
    }

    #[test]
    fn normal_forms_are_idempotent_on_the_prism(w in arb_word(5, 40)) {
        let inc = IncidenceStructure::from_cubic_graph(&connected_cubic_graphs(6).unwrap()[1]).unwrap();
        let ga = assign_generators(&inc);
        let w: Vec<u16> = w.into_iter().map(|g| g % ga.generator_count() as u16).collect();
        let sys = knuth_bendix(&ga, &inc, &[], &QUICK_LIMITS);
        let c = sys.reduce(&w);
        prop_assert_eq!(sys.reduce(&c), c.clone());
        prop_assert!(!c.windows(2).any(|p| p[0] == p[1]));
    }
}
