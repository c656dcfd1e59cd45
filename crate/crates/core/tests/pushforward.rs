use std::collections::BTreeSet;
use tropfan::modulifan::skeleton;
use tropfan::paramcurves::{
    check_image_balancing, contracted_psi_sum, overlapping_cells, pushforward_codim1, special_position,
    special_position_cells, Degree, Version,
};
use tropfan::Error;

#[test]
fn degree_one_versions_coincide() {
    let d = Degree::standard(1).unwrap();
    let v1 = special_position(&d, Version::V1).unwrap();
    let v2 = special_position(&d, Version::V2).unwrap();
    assert_eq!(v1, v2);
    assert_eq!(v1.len(), 6);
    // each cell is a ray: codimension one in R^4 modulo translations
    assert!(v1.iter().all(|c| c.rays.len() == 1 && c.rays[0].len() == 2));
    assert!(check_image_balancing(&v1).is_balanced());
    assert!(check_image_balancing(&v2).is_balanced());
    let direct = pushforward_codim1(&d, &contracted_psi_sum(&d).unwrap()).unwrap();
    assert_eq!(direct, pushforward_codim1(&d, &skeleton(5, 1).unwrap()).unwrap());
    assert_eq!(direct, v1);
}

#[test]
fn degree_two_supports_nest() {
    let d = Degree::standard(2).unwrap();
    assert!(matches!(special_position(&d, Version::V2), Err(Error::RefinementRequired(_))));
    let v1 = special_position_cells(&d, Version::V1).unwrap();
    let v2 = special_position_cells(&d, Version::V2).unwrap();
    assert!(overlapping_cells(&v2).is_some());
    let s1: BTreeSet<_> = v1.iter().map(|c| c.rays.clone()).collect();
    let s2: BTreeSet<_> = v2.iter().map(|c| c.rays.clone()).collect();
    assert!(s1.is_subset(&s2));
    assert!(v1.iter().chain(&v2).all(|c| c.weight > 0 && c.rays.len() == 7 && c.rays[0].len() == 8));
    let weighted: BTreeSet<_> = v2.iter().collect();
    let equal = v1.iter().filter(|c| weighted.contains(c)).count();
    eprintln!("degree 2: {} cells in v1, {} in v2, {equal} with equal weights", v1.len(), v2.len());
}
