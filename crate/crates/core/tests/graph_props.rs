use ergeom::generators::gen_gnp;
use ergeom::graph::{
    bfs, components, geodesic, giant_component, read_edge_list, write_edge_list, DistanceMatrix,
};
use ergeom::Graph;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..40, 0.0f64..0.3, any::<u64>()).prop_map(|(n, p, s)| gen_gnp(n, p, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn giant_is_one_component(g in arb_graph()) {
        let giant = giant_component(&g);
        prop_assert_eq!(components(&giant.graph).count(), 1);
        prop_assert_eq!(giant.graph.n(), components(&g).giant_size());
        giant.graph.validate().unwrap();
    }

    #[test]
    fn distances_are_a_metric(g in arb_graph(), picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<prop::sample::Index>()), 20)) {
        let g = giant_component(&g).graph;
        let n = g.n();
        let dm = DistanceMatrix::new(&g).unwrap();
        for (a, b, c) in picks {
            let (u, v, w) = (a.index(n), b.index(n), c.index(n));
            let from_u = bfs(&g, u).unwrap();
            prop_assert_eq!(from_u.distance(v), Some(dm.get(u, v)));
            prop_assert_eq!(dm.get(u, v), dm.get(v, u));
            prop_assert!(dm.get(u, w) <= dm.get(u, v) + dm.get(v, w));
            let path = geodesic(&g, u, v).unwrap();
            prop_assert_eq!(path.len() as u32 - 1, dm.get(u, v));
            prop_assert_eq!(path.first(), Some(&u));
            prop_assert_eq!(path.last(), Some(&v));
            prop_assert!(path.windows(2).all(|e| g.has_edge(e[0], e[1])));
            prop_assert_eq!(&dm.geodesic(&g, u, v), &path);
            prop_assert_eq!(from_u.path_to(v).unwrap(), path);
        }
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = read_edge_list(&buf[..]).unwrap();
        prop_assert_eq!(back, g);
    }
}
