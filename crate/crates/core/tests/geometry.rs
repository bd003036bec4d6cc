use pfquad::geometry::{write_tree_dump, parse_tree_dump, Domain, EdgeNeighbor, QuadtreeMesh, Side, Slit};
use pfquad::Mesh;
use proptest::prelude::*;

fn refined(picks: &[Vec<usize>], domain: Domain<f64>) -> Mesh {
    let mut mesh = QuadtreeMesh::build_initial_mesh(domain, 1, None)
        .unwrap()
        .with_max_depth(6)
        .unwrap();
    for round in picks {
        let leaves = mesh.leaves();
        let ids: Vec<_> = round.iter().map(|&k| leaves[k % leaves.len()]).collect();
        mesh.refine_cells_clamped(&ids).unwrap();
    }
    mesh
}

/// Length of the shared boundary of two axis-aligned squares.
fn shared_edge(a: ([f64; 2], f64), b: ([f64; 2], f64)) -> f64 {
    let overlap = |lo1: f64, s1: f64, lo2: f64, s2: f64| (lo1 + s1).min(lo2 + s2) - lo1.max(lo2);
    let ox = overlap(a.0[0], a.1, b.0[0], b.1);
    let oy = overlap(a.0[1], a.1, b.0[1], b.1);
    if ox.abs() < 1e-12 && oy > 1e-12 {
        oy
    } else if oy.abs() < 1e-12 && ox > 1e-12 {
        ox
    } else {
        0.0
    }
}

fn signed_area(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn refinement_keeps_mesh_consistent(
        picks in prop::collection::vec(prop::collection::vec(0usize..1000, 1..6), 1..6),
        l_panel in any::<bool>(),
    ) {
        let domain = if l_panel { Domain::l_shape([0.0, 0.0], 1.0) } else { Domain::square([0.0, 0.0], 1.0) };
        let area = domain.area();
        let mesh = refined(&picks, domain);
        prop_assert!(mesh.is_balanced());

        let elements = mesh.extract_elements();
        let mut total = 0.0;
        for e in &elements {
            let cell = mesh.cell(e.cell);
            let pts: Vec<[f64; 2]> = e.nodes.iter().map(|&n| mesh.node(n)).collect();
            prop_assert!((4..=8).contains(&pts.len()));
            let a = signed_area(&pts);
            prop_assert!((a - cell.size * cell.size).abs() < 1e-12);
            total += a;
            for p in &pts {
                let on_x = (p[0] - cell.origin[0]).abs() < 1e-12 || (p[0] - cell.origin[0] - cell.size).abs() < 1e-12;
                let on_y = (p[1] - cell.origin[1]).abs() < 1e-12 || (p[1] - cell.origin[1] - cell.size).abs() < 1e-12;
                prop_assert!(on_x || on_y);
            }
            prop_assert_eq!(mesh.locate_leaf(cell.center()), Some(e.cell));
        }
        prop_assert!((total - area).abs() < 1e-12);

        // hanging nodes sit on the midpoint of a coarser leaf's edge
        for n in mesh.hanging_nodes(&elements) {
            let p = mesh.node(n);
            let host = elements.iter().find(|e| e.nodes.contains(&n) && {
                let c = mesh.cell(e.cell);
                let mx = c.origin[0] + 0.5 * c.size;
                let my = c.origin[1] + 0.5 * c.size;
                (p[0] - mx).abs() < 1e-12 || (p[1] - my).abs() < 1e-12
            });
            prop_assert!(host.is_some());
        }
    }

    #[test]
    fn adjacency_matches_brute_force(picks in prop::collection::vec(prop::collection::vec(0usize..1000, 1..5), 1..5)) {
        let mesh = refined(&picks, Domain::square([0.0, 0.0], 1.0));
        let leaves = mesh.leaves();
        for &a in &leaves {
            let ca = mesh.cell(a);
            let mut reported: Vec<usize> = Vec::new();
            for side in Side::ALL {
                match mesh.neighbor(a, side) {
                    EdgeNeighbor::Boundary => {}
                    EdgeNeighbor::Same(n) | EdgeNeighbor::Coarser(n) => reported.push(n),
                    EdgeNeighbor::Finer(v) => reported.extend(v),
                }
            }
            reported.sort_unstable();
            let mut brute: Vec<usize> = leaves
                .iter()
                .copied()
                .filter(|&b| b != a && {
                    let cb = mesh.cell(b);
                    shared_edge((ca.origin, ca.size), (cb.origin, cb.size)) > 0.0
                })
                .collect();
            brute.sort_unstable();
            prop_assert_eq!(reported, brute);
        }
    }
}

#[test]
fn slit_doubles_nodes_along_the_notch() {
    let notch = Slit::new([0.0, 0.5], [0.5, 0.5]);
    let mesh = QuadtreeMesh::build_initial_mesh(Domain::square([0.0, 0.0], 1.0), 3, Some(notch)).unwrap();
    let pairs = mesh.slit_node_pairs();
    // mouth plus three interior lattice points; the tip node is shared
    assert_eq!(pairs.len(), 4);
    let elements = mesh.extract_elements();
    for (a, b) in pairs {
        assert_ne!(a, b);
        assert_eq!(mesh.node(a), mesh.node(b));
        for e in &elements {
            assert!(!(e.nodes.contains(&a) && e.nodes.contains(&b)));
        }
    }
}

#[test]
fn depth_limit_is_enforced() {
    let mut mesh = QuadtreeMesh::build_initial_mesh(Domain::square([0.0, 0.0], 1.0), 2, None)
        .unwrap()
        .with_max_depth(2)
        .unwrap();
    let leaves = mesh.leaves();
    assert!(mesh.refine_cells(&leaves[..1]).is_err());
    let report = mesh.refine_cells_clamped(&leaves[..2]).unwrap();
    assert!(report.split.is_empty());
    assert_eq!(report.clamped.len(), 2);
    assert_eq!(mesh.min_cell_size(), 0.25);
}

#[test]
fn tree_dump_lists_every_cell() {
    let mesh = refined(&[vec![0, 3], vec![5]], Domain::l_shape([0.0, 0.0], 2.0));
    let mut buf = Vec::new();
    write_tree_dump(&mut buf, &mesh).unwrap();
    let rows = parse_tree_dump(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(rows.len(), mesh.cells().len());
    for (row, c) in rows.iter().zip(mesh.cells()) {
        assert_eq!(row.0, c.id);
        assert_eq!(row.1, c.level);
        assert_eq!(row.3, c.size);
    }
    assert!(parse_tree_dump("1 2 3").is_err());
}
