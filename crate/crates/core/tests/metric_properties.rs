use lrp::{
    bfs_from, chemical_distance, restricted_distance, sample_configuration, Backend, Configuration,
    Distance, LatticeBox, Params, Point, Region,
};
use proptest::prelude::*;

fn config(d: usize, side: u64, s: f64, beta: f64, force_nn: bool, seed: u64) -> Configuration {
    let params = Params::builder(d, s, beta).force_nn(force_nn).build().unwrap();
    sample_configuration(&params, &LatticeBox::origin(d, side).unwrap(), 0, seed, Backend::Skip).unwrap()
}

fn add(a: Distance, b: Distance) -> Distance {
    match (a, b) {
        (Distance::Finite(x), Distance::Finite(y)) => Distance::Finite(x + y),
        _ => Distance::Unreachable,
    }
}

fn point(d: usize, side: u64, raw: u64) -> Point {
    (0..d).map(|i| ((raw >> (16 * i)) % side) as i64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_and_triangle(
        d in 1usize..=2, seed: u64, beta in 0.05f64..1.5, force_nn: bool,
        a: u64, b: u64, c: u64,
    ) {
        let side = if d == 1 { 40 } else { 9 };
        let cfg = config(d, side, 2.0, beta, force_nn, seed);
        let (x, y, z) = (point(d, side, a), point(d, side, b), point(d, side, c));
        let dxy = chemical_distance(&cfg, &x, &y, false).unwrap().value;
        let dyx = chemical_distance(&cfg, &y, &x, false).unwrap().value;
        let dyz = chemical_distance(&cfg, &y, &z, false).unwrap().value;
        let dxz = chemical_distance(&cfg, &x, &z, false).unwrap().value;
        prop_assert_eq!(dxy, dyx);
        prop_assert!(dxz <= add(dxy, dyz));
        prop_assert_eq!(dxy == Distance::Finite(0), x == y);
    }

    #[test]
    fn closing_an_edge_never_shortens(seed: u64, beta in 0.1f64..1.0, pick: usize, a: u64, b: u64) {
        let cfg = config(1, 48, 1.5, beta, true, seed);
        prop_assume!(cfg.edge_count() > 0);
        let drop = pick % cfg.edge_count();
        let thinner = cfg.retain_edges(|i, _| i != drop);
        let (x, y) = (point(1, 48, a), point(1, 48, b));
        let before = chemical_distance(&cfg, &x, &y, false).unwrap().value;
        let after = chemical_distance(&thinner, &x, &y, false).unwrap().value;
        prop_assert!(before <= after);
    }

    #[test]
    fn witnesses_are_shortest_open_paths(seed: u64, beta in 0.1f64..1.5, a: u64, b: u64) {
        let cfg = config(2, 10, 2.5, beta, false, seed);
        let (x, y) = (point(2, 10, a), point(2, 10, b));
        let r = chemical_distance(&cfg, &x, &y, true).unwrap();
        match (r.value, r.witness) {
            (Distance::Finite(n), Some(path)) => {
                path.validate(&cfg).unwrap();
                prop_assert_eq!(path.hops() as u32, n);
                prop_assert_eq!(path.first(), &x);
                prop_assert_eq!(path.last(), &y);
            }
            (Distance::Unreachable, None) => {}
            other => prop_assert!(false, "inconsistent result {:?}", other),
        }
    }

    #[test]
    fn restriction_only_lengthens(seed: u64, lo in 0i64..20, width in 1u64..28, a: u64, b: u64) {
        let cfg = config(1, 48, 1.2, 0.6, true, seed);
        let region = Region::cube(&[lo], width);
        let x = vec![lo + (a % width) as i64];
        let y = vec![lo + (b % width) as i64];
        let full = chemical_distance(&cfg, &x, &y, false).unwrap().value;
        let local = restricted_distance(&cfg, &x, &y, &region, true).unwrap();
        prop_assert!(full <= local.value);
        if let Some(path) = local.witness {
            prop_assert!(path.vertices().iter().all(|v| region.contains(v)));
            path.validate(&cfg).unwrap();
        }
        let whole = cfg.lattice_box().region();
        prop_assert_eq!(restricted_distance(&cfg, &x, &y, &whole, false).unwrap().value, full);
    }

    #[test]
    fn field_agrees_with_pairwise(seed: u64, a: u64) {
        let cfg = config(2, 8, 2.0, 0.8, false, seed);
        let x = point(2, 8, a);
        let field = bfs_from(&cfg, &x).unwrap();
        for raw in 0..64u64 {
            let y = vec![(raw / 8) as i64, (raw % 8) as i64];
            prop_assert_eq!(field.get(&y), chemical_distance(&cfg, &x, &y, false).unwrap().value);
        }
    }
}
