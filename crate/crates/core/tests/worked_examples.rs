use num_bigint::BigUint;
use num_traits::Zero;

use flowpoly::chambers::{in_cw_plus, is_regular, ChamberForm};
use flowpoly::kostant::{kk_closed, kostant_count, kostant_ct, kostant_strict};
use flowpoly::morris::{morris_closed, morris_recurrence, morris_residue_check, MorrisParams};
use flowpoly::poly::{factorial, parse_poly, rat, ratio, var_names, MultiPoly, Rational};
use flowpoly::residue::{iterated_residue, iterated_residue_dp, tres_coefficients, ResidueForm};
use flowpoly::system::{FlowSystem, Permutation, Weight};
use flowpoly::volume::{ehrhart_polynomial, relative_volume, volume_polynomial, EhrhartForm};

fn a(r: usize) -> FlowSystem {
    FlowSystem::complete(r).unwrap()
}

fn w(head: &[i64]) -> Weight {
    Weight::embed_ints(head)
}

fn p(r: usize, s: &str) -> MultiPoly {
    parse_poly(s, &var_names("a", r)).unwrap()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn shifts_of_complete_systems() {
    let a3 = a(3);
    assert_eq!(a3.num_roots(), 6);
    assert_eq!(a3.t_shifts(), vec![2, 1, 0]);
    assert_eq!(a3.s_shifts(), vec![1, 0, -1]);
    assert_eq!(a(4).q(), 3);
}

#[test]
fn kostant_counts() {
    assert_eq!(kostant_count(&a(2), &w(&[2, 1])).unwrap().value, big(3));
    assert_eq!(kostant_count(&a(3), &w(&[1, 2, 3])).unwrap().value, big(10));
    assert_eq!(kostant_ct(&a(3), &w(&[1, 2, 3])).unwrap().value, big(10));
    assert_eq!(kostant_ct(&a(2), &w(&[1, 0])).unwrap().value, big(2));
    assert_eq!(kostant_count(&a(3), &w(&[0, 0, 0])).unwrap().value, big(1));
    assert!(kostant_count(&a(3), &w(&[-1, 2, 0])).unwrap().value.is_zero());
    assert_eq!(kostant_strict(&a(2), &w(&[2, 1])).unwrap().value, big(1));
    assert!(kostant_strict(&a(2), &w(&[1, 0])).unwrap().value.is_zero());
}

#[test]
fn closed_kostant_products() {
    assert_eq!(kk_closed(2, 0).unwrap(), big(2));
    assert_eq!(kk_closed(3, 0).unwrap(), big(10));
    assert_eq!(kk_closed(4, 0).unwrap(), big(140));
}

#[test]
fn iterated_residues() {
    let id2 = Permutation::identity(2);
    let j = ResidueForm::parse(2, "x1", "x1, x2, x1-x2").unwrap();
    assert_eq!(iterated_residue(&j, &id2).unwrap(), rat(1));
    let f21 = ResidueForm::basis_element(&Permutation::parse("21").unwrap());
    assert_eq!(iterated_residue(&f21, &id2).unwrap(), rat(0));
    let z3 = ResidueForm::parse(3, "x1^3", "x1, x2, x3, x1-x2, x1-x3, x2-x3").unwrap();
    assert_eq!(iterated_residue(&z3, &Permutation::identity(3)).unwrap(), rat(1));
    let id3 = Permutation::identity(3);
    for (exps, v) in [([3, 0, 0], 1), ([2, 1, 0], 1), ([1, 2, 0], 0)] {
        assert_eq!(iterated_residue_dp(&a(3), &exps, &id3).unwrap(), v.into());
    }
    // a denominator spanning a single direction has zero total residue
    let flat = ResidueForm::parse(2, "1", "(x1-x2)^2").unwrap();
    assert!(tres_coefficients(&flat).unwrap().coeffs.is_empty());
}

#[test]
fn chamber_membership() {
    assert!(is_regular(&w(&[1, 1, 1])));
    assert!(!is_regular(&w(&[2, -1, 1])));
    assert!(!is_regular(&w(&[1, 0, 3])));
    let s213 = Permutation::parse("213").unwrap();
    assert!(!in_cw_plus(&w(&[1, 1, 1]), &s213));
    assert!(in_cw_plus(&w(&[3, -1, -1]), &s213));
    assert_eq!(ChamberForm::from_witness(&w(&[1, 1, 1])).unwrap().to_string(), "[123]");
    assert_eq!(ChamberForm::from_witness(&w(&[3, -1, -1])).unwrap().to_string(), "[123] - [213] - [312] + [321]");
    assert_eq!(ChamberForm::from_witness(&w(&[3, -2, 1])).unwrap().to_string(), "[123] - [213]");
}

#[test]
fn volumes_and_ehrhart_polynomials() {
    let nice3 = ChamberForm::nice(3);
    assert_eq!(volume_polynomial(&a(3), &nice3).unwrap(), p(3, "a1^2*(a1+3*a2)/6"));
    assert_eq!(ehrhart_polynomial(&a(3), &nice3, EhrhartForm::T).unwrap(), p(3, "(a1+1)*(a1+2)*(a1+3*a2+3)/6"));
    let c2 = ChamberForm::from_witness(&w(&[3, -1, -1])).unwrap();
    assert_eq!(volume_polynomial(&a(3), &c2).unwrap(), p(3, "(a1+a2+a3)^2*(a1+a2-2*a3)/6"));
    let c7 = ChamberForm::from_witness(&w(&[3, -2, 1])).unwrap();
    assert_eq!(volume_polynomial(&a(3), &c7).unwrap(), p(3, "(a1+a2)^3/6"));
    assert_eq!(ehrhart_polynomial(&a(3), &c7, EhrhartForm::S).unwrap(), p(3, "(a1+a2+1)*(a1+a2+2)*(a1+a2+3)/6"));
    let c2_a2 = ChamberForm::from_witness(&w(&[2, -1])).unwrap();
    assert_eq!(c2_a2.members().len(), 2);
    assert_eq!(ehrhart_polynomial(&a(2), &c2_a2, EhrhartForm::T).unwrap(), p(2, "a1 + a2 + 1"));
    // normalisation 1/360 is forced by the relative volume 2 at e1 - e5
    let v4 = volume_polynomial(&a(4), &ChamberForm::nice(4)).unwrap();
    assert_eq!(v4, p(4, "a1^3*(a1+a2+3*a3)*(a1^2+5*a1*a2+10*a2^2)/360"));
}

#[test]
fn relative_volumes() {
    assert_eq!(relative_volume(&a(3), &Weight::root(3, 1, 4)).unwrap(), rat(1));
    assert_eq!(relative_volume(&a(4), &Weight::root(4, 1, 5)).unwrap(), rat(2));
    assert_eq!(relative_volume(&a(2), &Weight::root(2, 1, 3)).unwrap(), rat(1));
    let face = a(4).without_root(2, 3).unwrap();
    assert_eq!(relative_volume(&face, &Weight::root(4, 1, 5)).unwrap(), rat(1));
}

#[test]
fn morris_examples() {
    let m = |r, l, k1, k2, k3| MorrisParams::new(r, l, k1, k2, k3).unwrap();
    assert_eq!(morris_recurrence(&m(3, 0, 1, 1, 0)).unwrap(), rat(6));
    assert_eq!(morris_recurrence(&m(3, 0, 1, 1, 1)).unwrap(), rat(12));
    assert_eq!(morris_recurrence(&m(3, 2, 0, 1, 1)).unwrap(), rat(0));
    assert_eq!(morris_closed(&m(3, 0, 1, 1, 1)).unwrap(), rat(12));
    assert_eq!(morris_closed(&m(4, 0, 1, 1, 1)).unwrap(), rat(240));
    // C_{r+1}(0,1,1,1) / r! = C_r(0,2,1,1) / (r-1)!
    for r in 2..=5usize {
        let lhs = morris_recurrence(&m(r, 0, 1, 1, 1)).unwrap() / Rational::from_integer(factorial(r as u64));
        let rhs = morris_closed(&m(r - 1, 0, 2, 1, 1)).unwrap() / Rational::from_integer(factorial(r as u64 - 1));
        assert_eq!(lhs, rhs, "r={r}");
    }
    let rep = morris_residue_check(&m(2, 0, 1, 1, 0)).unwrap();
    assert!(rep.matches && rep.constant == rat(2));
    let rep = morris_residue_check(&m(3, 0, 1, 1, 1)).unwrap();
    assert!(rep.matches && rep.constant == rat(12));
    assert_eq!(rep.coefficients.coeffs.len(), 6);
    assert_eq!(ratio(12, 1), rep.coefficients.get(&Permutation::identity(4)));
}
