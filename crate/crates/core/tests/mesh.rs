use meyers_core::mesh::*;
use proptest::prelude::*;

fn convex_polygon(angles: &[f64], radius: f64) -> Option<Polygon> {
    let mut a = angles.to_vec();
    a.sort_by(f64::total_cmp);
    a.dedup_by(|x, y| (*x - *y).abs() < 0.2);
    Polygon::new(a.iter().map(|t| [radius * t.cos(), radius * t.sin()]).collect()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn triangulations_of_convex_polygons_are_admissible(
        angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, 3..9),
        radius in 0.5f64..3.0,
        frac in 0.05f64..0.4,
    ) {
        let poly = convex_polygon(&angles, radius);
        prop_assume!(poly.as_ref().is_some_and(|p| p.area() > 0.05 * radius * radius));
        let poly = poly.unwrap();
        let h = frac * poly.diameter();
        let tri = triangulate(&poly, h).unwrap();
        let report = regularity_report(&tri);
        prop_assert!(report.admissible, "{:?}", report.violations);
        prop_assert!(report.h <= h);
        prop_assert!((tri.total_area() - poly.area()).abs() < 1e-10 * poly.area());
        for v in 0..tri.num_vertices() {
            prop_assert_eq!(tri.is_boundary(v), poly.on_boundary(tri.points()[v]));
        }
        // red refinement keeps every triangle similar to its parent
        let fine = refine_red(&tri);
        prop_assert!((fine.regularity() - tri.regularity()).abs() < 1e-9 * tri.regularity());
        prop_assert!((fine.mesh_size() - tri.mesh_size() / 2.0).abs() < 1e-12);
        prop_assert!(regularity_report(&fine).admissible);
    }

    #[test]
    fn mesh_export_round_trips(nx in 1usize..6, ny in 1usize..6) {
        let poly = Polygon::rectangle(-1.0, 0.0, 2.0, 1.5).unwrap();
        let tri = structured_rectangle(&poly, nx, ny);
        let back = parse_mesh(&write_mesh(&tri), poly).unwrap();
        prop_assert_eq!(back, tri);
    }
}

#[test]
fn rectangle_meshes_use_the_target_spacing() {
    let tri = triangulate(&Polygon::unit_square(), 0.125).unwrap();
    assert_eq!(tri.num_vertices(), 81);
    assert_eq!(tri.num_triangles(), 128);
    assert!((tri.mesh_size() - 0.125 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(tri.interior_vertices().len(), 49);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(Polygon::new(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
    // clockwise
    assert!(Polygon::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
    // not convex
    assert!(Polygon::new(vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.3], [2.0, 2.0], [0.0, 2.0]]).is_err());
    assert!(triangulate(&Polygon::unit_square(), 0.0).is_err());
    assert!(triangulate(&Polygon::unit_square(), 5.0).is_err());
}

#[test]
fn hanging_nodes_are_reported() {
    let poly = Polygon::unit_square();
    let points = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.75, 0.75]];
    // the diagonal (0, 2) passes through 4 and 5 without using them
    let triangles = vec![[0, 1, 2], [0, 2, 3], [0, 1, 4]];
    let tri = Triangulation::from_raw(poly, points, triangles);
    let report = regularity_report(&tri);
    assert!(!report.admissible);
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v.kind, ViolationKind::HangingNode { .. })));
}
