use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::point_segment_distance;

const SHAPE_BOUND: f64 = 10.0;

#[test]
fn unit_square_counts() {
    let m = Mesh::<f64>::unit_square(4).unwrap();
    assert_eq!(m.num_elements(), 32);
    assert_eq!(m.num_vertices(), 25);
    assert_eq!(m.boundary_facets().len(), 16);
    m.check_invariants(SHAPE_BOUND).unwrap();

    let m1 = Mesh::<f64>::unit_square(1).unwrap();
    assert_eq!(m1.num_elements(), 2);
    for e in 0..2 {
        assert!((m1.diameter(e) - 2f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn unit_square_anchor() {
    let m = Mesh::<f64>::unit_square(4).unwrap();
    let b = &m.boundary_facets()[m.boundary_facet_at(0.0)];
    assert_eq!(b.arc[0], 0.0);
    assert_eq!(m.vertex(b.vertices[0]), Point2::new(0.0, 0.0));
    let dir = m.vertex(b.vertices[1]) - m.vertex(b.vertices[0]);
    assert!(dir.x > 0.0 && dir.y == 0.0);
}

#[test]
fn lshape_counts() {
    let m1 = Mesh::<f64>::lshape(1).unwrap();
    assert_eq!(m1.num_elements(), 6);
    m1.check_invariants(SHAPE_BOUND).unwrap();
    let m2 = Mesh::<f64>::lshape(2).unwrap();
    assert_eq!(m2.num_elements(), 24);
    for e in 0..24 {
        assert!((m2.area(e) - 0.125).abs() < 1e-15);
    }
    m2.check_invariants(SHAPE_BOUND).unwrap();
    assert_eq!(m2.perimeter(), 8.0);
}

#[test]
fn lshape_single_reentrant_vertex() {
    for n in 1..4 {
        let m = Mesh::<f64>::lshape(n).unwrap();
        let origin: Vec<usize> = (0..m.num_vertices())
            .filter(|&v| m.is_boundary_vertex(v) && m.vertex(v) == Point2::new(0.0, 0.0))
            .collect();
        assert_eq!(origin.len(), 1);
        // interior angle from the angles of incident triangles
        let v = origin[0];
        let mut angle = 0.0;
        for tri in m.triangles() {
            if let Some(i) = tri.iter().position(|&w| w == v) {
                let p = m.vertex(tri[i]);
                let a = m.vertex(tri[(i + 1) % 3]) - p;
                let b = m.vertex(tri[(i + 2) % 3]) - p;
                angle += a.cross(b).atan2(a.dot(b));
            }
        }
        assert!((angle - 1.5 * std::f64::consts::PI).abs() < 1e-12);
    }
}

#[test]
fn lshape_anchor() {
    let m = Mesh::<f64>::lshape(2).unwrap();
    let b = &m.boundary_facets()[0];
    assert_eq!(m.vertex(b.vertices[0]), Point2::new(-1.0, -1.0));
}

#[test]
fn refine_nothing_is_identity() {
    let m = Mesh::<f64>::unit_square(3).unwrap();
    let r = m.refine(&[]).unwrap();
    assert_eq!(r.vertices(), m.vertices());
    assert_eq!(r.triangles(), m.triangles());
}

#[test]
fn refine_all_doubles() {
    let m = Mesh::<f64>::unit_square(3).unwrap();
    let all: Vec<usize> = (0..m.num_elements()).collect();
    let r = m.refine(&all).unwrap();
    assert!(r.num_elements() >= 2 * m.num_elements());
    r.check_invariants(SHAPE_BOUND).unwrap();
    for e in 0..r.num_elements() {
        let p = r.parent(e).unwrap();
        assert!(r.diameter(e) < m.diameter(p));
    }
}

#[test]
fn refine_single_interior_triangle_is_conforming() {
    let m = Mesh::<f64>::unit_square(4).unwrap();
    let e = (0..m.num_elements())
        .find(|&e| m.triangles()[e].iter().all(|&v| !m.is_boundary_vertex(v)))
        .unwrap();
    let r = m.refine(&[e]).unwrap();
    r.check_invariants(SHAPE_BOUND).unwrap();
    // the neighbour across the refinement edge was bisected too
    assert!(r.num_elements() >= m.num_elements() + 2);
    let children: Vec<usize> = (0..r.num_elements())
        .filter(|&c| r.parent(c) == Some(e))
        .collect();
    assert!(children.len() >= 2);
}

#[test]
fn uniform_refine_halves_diameters() {
    let m = Mesh::<f64>::unit_square(2).unwrap();
    let r = m.uniform_refine().unwrap();
    assert_eq!(r.num_elements(), 4 * m.num_elements());
    for e in 0..r.num_elements() {
        let p = r.parent(e).unwrap();
        assert!((r.diameter(e) - 0.5 * m.diameter(p)).abs() < 1e-15);
    }
    r.check_invariants(SHAPE_BOUND).unwrap();
}

fn random_rounds(mut mesh: Mesh<f64>, rounds: usize, seed: u64) -> Mesh<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let n = mesh.num_elements();
        let k = rng.gen_range(1..=(n / 4).max(1));
        let marked: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let refined = mesh.refine(&marked).unwrap();
        for c in 0..refined.num_elements() {
            let p = refined.parent(c).unwrap();
            if refined.level(c) > mesh.level(p) {
                assert!(refined.diameter(c) < mesh.diameter(p));
            }
        }
        mesh = refined;
        mesh.check_invariants(SHAPE_BOUND).unwrap();
    }
    mesh
}

#[test]
fn ten_random_rounds_keep_invariants() {
    random_rounds(Mesh::unit_square(2).unwrap(), 10, 7);
    random_rounds(Mesh::lshape(1).unwrap(), 10, 11);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn random_refinement_invariants(seed in any::<u64>(), lshape in any::<bool>()) {
        let m = if lshape { Mesh::lshape(1).unwrap() } else { Mesh::unit_square(2).unwrap() };
        let r = random_rounds(m, 6, seed);
        let total: f64 = r.boundary_facets().iter().map(|b| b.length).sum();
        prop_assert!((total - r.perimeter()).abs() <= 1e-12 * r.perimeter());
    }
}

#[test]
fn distance_zero_for_boundary_patches() {
    let m = Mesh::<f64>::unit_square(4).unwrap();
    let d = compute_distance_field(&m);
    for e in 0..m.num_elements() {
        let touches = d.element_patches[e]
            .iter()
            .flat_map(|&q| m.triangles()[q].iter())
            .any(|&v| m.is_boundary_vertex(v));
        assert_eq!(d.rho[e] == 0.0, touches);
    }
}

#[test]
fn distance_interior_patch() {
    // on an 8x8 square mesh the central triangles see patch vertices no
    // closer than 0.25 to the boundary
    let m = Mesh::<f64>::unit_square(8).unwrap();
    let d = compute_distance_field(&m);
    let v = (0..m.num_vertices())
        .find(|&v| m.vertex(v) == Point2::new(0.5, 0.25))
        .unwrap();
    assert_eq!(d.vertex_distance[v], 0.25);
    let e = (0..m.num_elements())
        .find(|&e| {
            let c = m.centroid(e);
            (c.x - 0.5).abs() < 0.1 && (c.y - 0.5).abs() < 0.1
        })
        .unwrap();
    let brute = d.element_patches[e]
        .iter()
        .flat_map(|&q| m.triangles()[q].iter())
        .map(|&v| {
            let p = m.vertex(v);
            p.x.min(1.0 - p.x).min(p.y).min(1.0 - p.y)
        })
        .fold(f64::INFINITY, f64::min);
    assert_eq!(d.rho[e], brute);
    assert!(d.rho[e] >= 0.25);
}

#[test]
fn distance_lshape_brute_force() {
    let m = Mesh::<f64>::lshape(10).unwrap();
    let d = compute_distance_field(&m);
    let chart = m.chart();
    let v = (0..m.num_vertices())
        .find(|&v| {
            let p = m.vertex(v);
            (p.x - 0.1).abs() < 1e-12 && (p.y - 0.1).abs() < 1e-12
        })
        .unwrap();
    let brute = (0..chart.num_segments())
        .map(|i| {
            let (a, b) = chart.segment(i);
            point_segment_distance(m.vertex(v), a, b)
        })
        .fold(f64::INFINITY, f64::min);
    assert!((d.vertex_distance[v] - brute).abs() < 1e-15);
    assert!((brute - 0.1).abs() < 1e-12);
}

#[test]
fn rho_under_refinement() {
    let m = Mesh::<f64>::unit_square(4).unwrap();
    let d0 = compute_distance_field(&m);
    let all: Vec<usize> = (0..m.num_elements()).step_by(3).collect();
    let r = m.refine(&all).unwrap();
    let d1 = compute_distance_field(&r);
    for c in 0..r.num_elements() {
        let p = r.parent(c).unwrap();
        assert!(d1.rho[c] <= d0.rho[p] + m.diameter(p));
    }
}

#[test]
fn vertex_patches_chain() {
    let m = Mesh::<f64>::unit_square(2).unwrap();
    let d = compute_distance_field(&m);
    assert_eq!(d.vertex_patches.len(), m.boundary_facets().len());
    for (v, facets) in &d.vertex_patches {
        assert_eq!(facets.len(), 2);
        let bf = m.boundary_facets();
        assert_eq!(bf[facets[0]].vertices[1], *v);
        assert_eq!(bf[facets[1]].vertices[0], *v);
    }
}

#[test]
fn pw_size_formula() {
    assert!((pw_size_target(0.125f64, 0.25) - 1.0 / 16.0).abs() < 1e-15);
    assert_eq!(pw_size_target(0.125f64, 0.0), 1.0 / 64.0);
}

#[test]
fn pw_mesh_respects_size_law() {
    let h = 0.125f64;
    let m = generate_pw_mesh::<f64>(DomainKind::UnitSquare, h, 1_000_000).unwrap();
    m.check_invariants(SHAPE_BOUND).unwrap();
    for bf in m.boundary_facets() {
        assert!(bf.length <= h * h + 1e-15);
    }
    let d = compute_distance_field(&m);
    for e in 0..m.num_elements() {
        let dist = m.triangles()[e]
            .iter()
            .map(|&v| d.vertex_distance[v])
            .fold(f64::INFINITY, f64::min);
        assert!(m.diameter(e) <= pw_size_target(h, dist) + 1e-15);
    }
}

#[test]
fn pw_mesh_h_one_is_coarse() {
    let m = generate_pw_mesh::<f64>(DomainKind::UnitSquare, 1.0, 1000).unwrap();
    // sqrt(2) > 1 so the two initial triangles are bisected, nothing more
    assert!(m.num_elements() <= 8);
    for bf in m.boundary_facets() {
        assert!(bf.length <= 1.0);
    }
}

#[test]
fn pw_mesh_cap() {
    let err = generate_pw_mesh::<f64>(DomainKind::UnitSquare, 0.05, 500).unwrap_err();
    assert!(matches!(
        err,
        crate::error::Error::MeshCapExceeded { cap: 500 }
    ));
}

#[test]
fn mesh_dump_format() {
    let m = Mesh::<f64>::unit_square(1).unwrap();
    let mut buf = Vec::new();
    write_mesh(&m, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "OFF-like: 4 2");
    assert_eq!(lines.len(), 1 + 4 + 2);
    assert_eq!(lines[1], "0 0");
}

#[test]
fn works_in_single_precision() {
    let m = Mesh::<f32>::unit_square(4).unwrap();
    m.check_invariants(10.0).unwrap();
    let r = m.uniform_refine().unwrap();
    assert_eq!(r.num_elements(), 128);
}
