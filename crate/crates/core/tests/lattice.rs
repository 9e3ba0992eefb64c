use num_bigint::BigInt;
use num_rational::BigRational;
use toric_lg::catalog::Catalog;
use toric_lg::{Error, LatticePolytope, LatticeVector, UnimodularMap};

fn v3(a: i64, b: i64, c: i64) -> LatticeVector {
    LatticeVector::new(&[a, b, c]).unwrap()
}

fn rat(coords: &[i64]) -> Vec<BigRational> {
    coords
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

#[test]
fn simplex_of_projective_space() {
    let p = Catalog::bundled()
        .row(1)
        .unwrap()
        .newton_polytope()
        .unwrap();
    assert_eq!(p.vertices().len(), 4);
    assert!(p.is_reflexive().unwrap());
    let d = p.dual().unwrap();
    assert!(d.vertices().contains(&rat(&[3, -1, -1])));
    assert_eq!(d.lattice_points().all, 35);
    assert_eq!(d.to_lattice().unwrap().normalized_volume(), 64);
    assert_eq!(p.normalized_volume(), 4);
    assert_eq!(p.lattice_points().all, 5);
}

#[test]
fn cube_and_octahedron() {
    let oct = LatticePolytope::convex_hull(&[
        v3(1, 0, 0),
        v3(-1, 0, 0),
        v3(0, 1, 0),
        v3(0, -1, 0),
        v3(0, 0, 1),
        v3(0, 0, -1),
    ])
    .unwrap();
    let cube = oct.dual().unwrap().to_lattice().unwrap();
    assert_eq!(cube.vertices().len(), 8);
    assert_eq!(cube.lattice_points().all, 27);
    assert_eq!(cube.normalized_volume(), 48);
    assert_eq!(cube.dual().unwrap().to_lattice().unwrap(), oct);
}

#[test]
fn non_reflexive_and_degenerate_inputs() {
    let big =
        LatticePolytope::convex_hull(&[v3(2, 0, 0), v3(0, 2, 0), v3(0, 0, 2), v3(-2, -2, -2)])
            .unwrap();
    assert!(!big.is_reflexive().unwrap());
    let flat = LatticePolytope::convex_hull(&[v3(1, 0, 0), v3(0, 1, 0), v3(-1, -1, 0)]);
    assert!(matches!(flat, Err(Error::DegenerateInput(_))));
    let off = LatticePolytope::convex_hull(&[v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1), v3(1, 1, 1)])
        .unwrap();
    assert!(matches!(off.dual(), Err(Error::OriginNotInterior)));
}

#[test]
fn non_unimodular_map_rejected() {
    let m = UnimodularMap::new(vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]);
    assert!(matches!(m, Err(Error::NotUnimodular { det: 4 })));
}

#[test]
fn normal_form_identifies_equivalent_rows() {
    let c = Catalog::bundled();
    let a = c.row(13).unwrap().newton_polytope().unwrap();
    let u = UnimodularMap::new(vec![vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 1]]).unwrap();
    let b = a.apply_unimodular(&u).unwrap();
    assert_ne!(a, b);
    assert_eq!(a.normal_form().unwrap(), b.normal_form().unwrap());
    assert_ne!(
        c.row(1)
            .unwrap()
            .newton_polytope()
            .unwrap()
            .normal_form()
            .unwrap(),
        a.normal_form().unwrap()
    );
}
