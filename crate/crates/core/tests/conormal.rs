use std::sync::Arc;

use eulob::conormal::{cnr_critical_locus, conormal_cycle, im_df_ideal, VarietyPresentation};
use eulob::cycles::ComponentCycle;
use eulob::poly::{parse_polynomial, Ideal, VariableContext};

fn ctx(names: &[&str]) -> Arc<VariableContext> {
    VariableContext::new(names).unwrap()
}

fn prime(c: &Arc<VariableContext>, gens: &[&str]) -> ComponentCycle {
    ComponentCycle::from_prime(Ideal::parse(c, gens).unwrap(), 1).unwrap()
}

#[test]
fn conormal_of_two_planes() {
    let b = ctx(&["x", "y", "z"]);
    let x = VarietyPresentation::parse(&b, &["x*y"]).unwrap();
    let c = conormal_cycle(&x, 0).unwrap();
    let cot = c.context().clone();
    assert!(c.same_as(&prime(&cot, &["x", "w1", "w2"]).add(&prime(&cot, &["y", "w0", "w2"]))));
}

#[test]
fn conormal_of_cusp_line() {
    let b = ctx(&["t", "x", "y"]);
    let x = VarietyPresentation::parse(&b, &["y^2-x^3"]).unwrap();
    let c = conormal_cycle(&x, 0).unwrap();
    assert_eq!(c.components().len(), 1);
    let target = Ideal::parse(c.context(), &["y^2-x^3", "w0", "2*w1*y+3*w2*x^2", "4*w1^2-9*w2^2*x"]).unwrap();
    assert!(c.components()[0].prime.radical_equals(&target));
    assert!(!c.is_unverified());
    let w: Vec<usize> = (3..6).collect();
    assert!(c.components()[0].prime.gb().iter().all(|g| g.is_homogeneous_in(&w)));
}

#[test]
fn conormal_of_line_and_plane() {
    let b = ctx(&["x", "y"]);
    let c = conormal_cycle(&VarietyPresentation::parse(&b, &["x"]).unwrap(), 0).unwrap();
    assert!(c.same_as(&prime(c.context(), &["x", "w1"])));
    let empty: [&str; 0] = [];
    let c = conormal_cycle(&VarietyPresentation::parse(&b, &empty).unwrap(), 0).unwrap();
    assert!(c.same_as(&prime(c.context(), &["w0", "w1"])));
}

#[test]
fn image_of_differential() {
    let b = ctx(&["x", "y", "z"]);
    let i = im_df_ideal(&parse_polynomial(&b, "x+y^2+y*z").unwrap()).unwrap();
    assert!(i.equals(&Ideal::parse(i.context(), &["w0-1", "w1-2*y-z", "w2-y"]).unwrap()));
    let b = ctx(&["t", "x", "y"]);
    let i = im_df_ideal(&parse_polynomial(&b, "2*y-3*t*x+t^3").unwrap()).unwrap();
    assert!(i.equals(&Ideal::parse(i.context(), &["w0+3*(x-t^2)", "w1+3*t", "w2-2"]).unwrap()));
}

#[test]
fn critical_loci() {
    let b = ctx(&["x", "y", "z"]);
    let x = VarietyPresentation::parse(&b, &["x*y"]).unwrap();
    let s = cnr_critical_locus(&x, &parse_polynomial(&b, "x+y^2+y*z").unwrap(), 0).unwrap();
    assert!(s.union.equals(&Ideal::parse(&b, &["x", "y", "z"]).unwrap()));

    let b = ctx(&["t", "x", "y"]);
    let x = VarietyPresentation::parse(&b, &["y^2-x^3"]).unwrap();
    let s = cnr_critical_locus(&x, &parse_polynomial(&b, "2*y-3*t*x+t^3").unwrap(), 0).unwrap();
    assert!(s.union.radical_equals(&Ideal::parse(&b, &["x-t^2", "y-t^3"]).unwrap()));

    let b = ctx(&["x", "y"]);
    let empty: [&str; 0] = [];
    let x = VarietyPresentation::parse(&b, &empty).unwrap();
    let s = cnr_critical_locus(&x, &parse_polynomial(&b, "x^2+y^2").unwrap(), 0).unwrap();
    assert!(s.union.equals(&Ideal::parse(&b, &["x", "y"]).unwrap()));
}
