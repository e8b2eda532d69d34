use std::sync::Arc;

use eulob::cycles::{
    decompose_ideal, intersect_hypersurface, local_intersection_number, pushforward_section, split_by_subvariety,
    ComponentCycle,
};
use eulob::poly::{int_point, parse_polynomial, Ideal, MonomialOrder, VariableContext};

fn ctx(names: &[&str]) -> Arc<VariableContext> {
    VariableContext::new(names).unwrap()
}

fn cusp_ctx() -> Arc<VariableContext> {
    VariableContext::cotangent(&ctx(&["t", "x", "y"])).unwrap()
}

fn prime(c: &Arc<VariableContext>, gens: &[&str], m: i64) -> ComponentCycle {
    ComponentCycle::from_prime(Ideal::parse(c, gens).unwrap(), m).unwrap()
}

fn cycle(c: &Arc<VariableContext>, parts: &[(&[&str], i64)]) -> ComponentCycle {
    parts.iter().fold(ComponentCycle::zero(c), |acc, (g, m)| acc.add(&prime(c, g, *m)))
}

#[test]
fn decompose_xy() {
    let c = ctx(&["x", "y"]);
    let d = decompose_ideal(&Ideal::parse(&c, &["x*y"]).unwrap(), 0).unwrap();
    assert!(d.same_as(&cycle(&c, &[(&["x"], 1), (&["y"], 1)])));
    assert!(!d.is_unverified());
}

#[test]
fn decompose_square() {
    let c = ctx(&["x", "y"]);
    let d = decompose_ideal(&Ideal::parse(&c, &["x^2"]).unwrap(), 0).unwrap();
    assert!(d.same_as(&cycle(&c, &[(&["x"], 2)])));
}

#[test]
fn decompose_double_dagger() {
    let c = cusp_ctx();
    let i = Ideal::parse(&c, &["y^2-x^3", "w0", "w1*y+3*x^2", "w2-2"]).unwrap();
    for seed in [0, 7] {
        let d = decompose_ideal(&i, seed).unwrap();
        let want = cycle(
            &c,
            &[(&["27*y+w1^3", "9*x-w1^2", "w0", "w2-2"], 1), (&["x", "y", "w0", "w2-2"], 3)],
        );
        assert!(d.same_as(&want), "{d}");
        assert!(!d.is_unverified());
    }
}

#[test]
fn decompose_non_principal_multiplicity() {
    let c = ctx(&["x", "y", "z"]);
    let d = decompose_ideal(&Ideal::parse(&c, &["x^2", "x*y", "y^2"]).unwrap(), 3).unwrap();
    assert!(d.same_as(&cycle(&c, &[(&["x", "y"], 3)])));
}

#[test]
fn intersections() {
    let c = cusp_ctx();
    let g2 = prime(&c, &["27*y+w1^3", "9*x-w1^2", "w0", "w2-2"], 1);
    let h = parse_polynomial(&c, "w1+3*t").unwrap();
    let r = intersect_hypersurface(&g2, &h, 0).unwrap();
    assert!(r.same_as(&prime(&c, &["y-t^3", "x-t^2", "w0", "w1+3*t", "w2-2"], 1)));

    let p = ctx(&["x", "y"]);
    let y = parse_polynomial(&p, "y").unwrap();
    let r = intersect_hypersurface(&prime(&p, &["x"], 1), &y, 0).unwrap();
    assert!(r.same_as(&prime(&p, &["x", "y"], 1)));
    let r = intersect_hypersurface(&prime(&p, &["y-x^2"], 1), &y, 0).unwrap();
    assert!(r.same_as(&prime(&p, &["x", "y"], 2)));
    assert!(intersect_hypersurface(&prime(&p, &["y"], 1), &y, 0).is_err());
}

#[test]
fn splitting() {
    let c = cusp_ctx();
    let l1 = prime(&c, &["y-t^3", "x-t^2", "w0", "w1+3*t", "w2-2"], 1);
    let imdf = Ideal::parse(&c, &["w0+3*(x-t^2)", "w1+3*t", "w2-2"]).unwrap();
    let (inside, outside) = split_by_subvariety(&l1, &imdf);
    assert!(inside.same_as(&l1) && outside.is_zero());

    let p = ctx(&["x", "y"]);
    let (inside, outside) = split_by_subvariety(&prime(&p, &["x"], 1), &Ideal::parse(&p, &["x", "y"]).unwrap());
    assert!(inside.is_zero() && !outside.is_zero());
}

#[test]
fn pushforwards() {
    let c = cusp_ctx();
    let base = c.base();
    let f = parse_polynomial(&base, "2*y-3*t*x+t^3").unwrap();
    let l1 = prime(&c, &["y-t^3", "x-t^2", "w0", "w1+3*t", "w2-2"], 1);
    let r = pushforward_section(&l1, &f).unwrap();
    assert!(r.same_as(&prime(&base, &["y-t^3", "x-t^2"], 1)));

    let c1 = VariableContext::cotangent(&ctx(&["z0"])).unwrap();
    let f1 = parse_polynomial(&c1.base(), "z0^2").unwrap();
    let r = pushforward_section(&prime(&c1, &["z0", "w0-2*z0"], 1), &f1).unwrap();
    assert!(r.same_as(&prime(&c1.base(), &["z0"], 1)));
}

#[test]
fn local_numbers() {
    let b = ctx(&["t", "x", "y"]);
    let l = prime(&b, &["y-t^3", "x-t^2"], 1);
    let t = parse_polynomial(&b, "t").unwrap();
    assert_eq!(local_intersection_number(&l, &[t], &int_point(&[0, 0, 0])).unwrap(), 1);
    let p = ctx(&["x", "y"]);
    let y = parse_polynomial(&p, "y").unwrap();
    assert_eq!(local_intersection_number(&prime(&p, &["x"], 2), &[y], &int_point(&[0, 0])).unwrap(), 2);
    assert_eq!(local_intersection_number(&prime(&p, &["x", "y"], 1), &[], &int_point(&[0, 0])).unwrap(), 1);
}

#[test]
fn serial_round_trip() {
    let c = cusp_ctx();
    let z = cycle(&c, &[(&["27*y+w1^3", "9*x-w1^2", "w0", "w2-2"], 1), (&["x", "y", "w0", "w2-2"], 3)]);
    let s = z.to_serial(MonomialOrder::GrevLex);
    let json = serde_json::to_string(&s).unwrap();
    let back: Vec<eulob::cycles::SerialComponent> = serde_json::from_str(&json).unwrap();
    assert!(ComponentCycle::from_serial(&c, &back).unwrap().same_as(&z));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn principal_product_of_lines(parts in proptest::collection::btree_map(-4i64..5, 1i64..4, 1..4)) {
        let c = ctx(&["x", "y", "z"]);
        let gens: Vec<String> = parts.iter().map(|(a, m)| format!("(x-({a})*y)^{m}")).collect();
        let d = decompose_ideal(&Ideal::parse(&c, &[gens.join("*").as_str()]).unwrap(), 7).unwrap();
        let expected = parts
            .iter()
            .fold(ComponentCycle::zero(&c), |acc, (a, m)| acc.add(&prime(&c, &[format!("x-({a})*y").as_str()], *m)));
        proptest::prop_assert!(d.same_as(&expected));

        let (inside, outside) = split_by_subvariety(&d, &Ideal::parse(&c, &["x"]).unwrap());
        proptest::prop_assert!(inside.add(&outside).same_as(&d));
        proptest::prop_assert_eq!(inside.is_zero(), !parts.contains_key(&0));
    }
}
