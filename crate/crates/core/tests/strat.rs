use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use eulob::strat::*;

fn stratum(name: &str, dim: usize, open: bool) -> Stratum {
    Stratum { name: name.into(), dim, component_dim: open.then_some(dim) }
}

fn pairs(p: &[(&str, &str)]) -> Vec<(String, String)> {
    p.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn node() -> (StratifiedSpace, LinkData) {
    let s = StratifiedSpace::new(
        vec![stratum("0", 0, false), stratum("b1", 1, true), stratum("b2", 1, true)],
        &pairs(&[("0", "b1"), ("0", "b2")]),
    )
    .unwrap();
    let l = LinkData::from_names(&s, &[("0", "b1", 1), ("0", "b2", 1)]).unwrap();
    (s, l)
}

fn two_planes() -> (StratifiedSpace, LinkData) {
    let s = StratifiedSpace::new(
        vec![stratum("0", 0, false), stratum("A", 1, false), stratum("P1", 2, true), stratum("P2", 2, true)],
        &pairs(&[("0", "A"), ("A", "P1"), ("A", "P2")]),
    )
    .unwrap();
    let l = LinkData::from_names(&s, &[("0", "A", 1), ("0", "P1", 0), ("0", "P2", 0), ("A", "P1", 1), ("A", "P2", 1)])
        .unwrap();
    (s, l)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn smooth_curve() {
    let s = StratifiedSpace::new(vec![stratum("C", 1, true)], &[]).unwrap();
    let l = LinkData::new(&s, BTreeMap::new()).unwrap();
    let c = cc_of_function(&s, &l, &ConstructibleFunction::constant(&s, 1)).unwrap();
    assert_eq!(c.coeffs, ints(&[-1]));
    assert_eq!(characteristic_function(&s, &l).unwrap().values, ints(&[1]));
}

#[test]
fn node_coefficients() {
    let (s, l) = node();
    let one = ConstructibleFunction::constant(&s, 1);
    let c = cc_of_function(&s, &l, &one).unwrap();
    assert_eq!(c.coeffs, ints(&[-1, -1, -1]));
    assert_eq!(function_from_cc(&s, &l, &c).unwrap(), one);
    let eu = euler_obstruction_links(&s, &l).unwrap();
    assert_eq!(eu.values, ints(&[2, 1, 1]));
    assert_eq!(cc_of_function(&s, &l, &eu).unwrap().coeffs, ints(&[0, -1, -1]));
    assert_eq!(function_from_cc(&s, &l, &CcCoefficients::from_ints(&[0, -1, -1])).unwrap(), eu);
    assert_eq!(characteristic_function(&s, &l).unwrap(), eu);
    let zero = function_from_cc(&s, &l, &CcCoefficients::from_ints(&[0, 0, 0])).unwrap();
    assert_eq!(zero, ConstructibleFunction::zero(&s));
}

#[test]
fn isolated_singularity() {
    for e in [-2i64, 0, 3] {
        let s = StratifiedSpace::new(vec![stratum("p", 0, false), stratum("R", 2, true)], &pairs(&[("p", "R")])).unwrap();
        let l = LinkData::from_names(&s, &[("p", "R", e)]).unwrap();
        assert_eq!(euler_obstruction_links(&s, &l).unwrap().values, ints(&[e, 1]));
        assert_eq!(characteristic_function(&s, &l).unwrap().values, ints(&[e, 1]));
        let m = MilnorData::from_names(&s, "p", &[("R", 5)]).unwrap();
        assert_eq!(relative_euler_obstruction_chi(&s, &l, &m).unwrap(), BigInt::from(e - 5));
    }
}

#[test]
fn two_planes_euler_obstruction() {
    let (s, l) = two_planes();
    let eu = euler_obstruction_links(&s, &l).unwrap();
    assert_eq!(eu.values, ints(&[2, 2, 1, 1]));
    // χ(L) + Σ mult·(mult_X - 1) with χ(L) = 1 and the axis of multiplicity 1
    assert_eq!(eu.values[0], BigInt::from(1 + 1 * (2 - 1)));
}

#[test]
fn smooth_space_relative() {
    let s = StratifiedSpace::new(vec![stratum("U", 2, true)], &[]).unwrap();
    let l = LinkData::new(&s, BTreeMap::new()).unwrap();
    let m = MilnorData::from_names(&s, "U", &[("U", -1)]).unwrap();
    assert_eq!(relative_euler_obstruction_chi(&s, &l, &m).unwrap(), BigInt::from(2));
}

#[test]
fn generic_linear_milnor_data() {
    let (s, l) = two_planes();
    for p in ["0", "A"] {
        let m = MilnorData::from_links(&s, &l, s.index_of(p).unwrap());
        assert_eq!(relative_euler_obstruction_chi(&s, &l, &m).unwrap(), BigInt::from(0));
    }
}

#[test]
fn nearby_and_vanishing() {
    let (s, l) = node();
    let m = MilnorData::from_links(&s, &l, 0);
    let (psi, phi) = nearby_vanishing_chi(&s, &ConstructibleFunction::constant(&s, 1), &m).unwrap();
    assert_eq!((psi, phi), (BigInt::from(2), BigInt::from(1)));
    let (psi, phi) = nearby_vanishing_chi(&s, &ConstructibleFunction::zero(&s), &m).unwrap();
    assert_eq!((psi, phi), (BigInt::from(0), BigInt::from(0)));
    let eu = euler_obstruction_links(&s, &l).unwrap();
    assert_eq!(nearby_vanishing_chi(&s, &eu, &m).unwrap().1, BigInt::from(0));
}

#[test]
fn algebra() {
    let c = CcCoefficients::from_ints(&[3, -1, 0]);
    assert_eq!(shift(&c, 2), c);
    assert_eq!(shift(&c, 1).coeffs, ints(&[-3, 1, 0]));
    assert_eq!(shift(&c, -1), shift(&c, 1));
    assert_eq!(add(&c, &shift(&c, 1)).unwrap().coeffs, ints(&[0, 0, 0]));
    let a = ConstructibleFunction::from_ints(&[2, 1, 1]);
    assert_eq!(union(&a, &a, &a).unwrap(), a);
}

#[test]
fn slice_matches_node() {
    let (s, l) = two_planes();
    let eu = euler_obstruction_links(&s, &l).unwrap();
    let c = cc_of_function(&s, &l, &eu).unwrap();
    let sl = slice(&s, &c, s.index_of("A").unwrap());
    let (ns, nl) = node();
    let nc = cc_of_function(&ns, &nl, &euler_obstruction_links(&ns, &nl).unwrap()).unwrap();
    let expected: BTreeMap<String, BigInt> =
        [("A", 0usize), ("P1", 1), ("P2", 2)].iter().map(|(k, i)| (k.to_string(), -nc.coeffs[*i].clone())).collect();
    assert_eq!(sl, expected);
}

#[test]
fn products() {
    let (ns, nl) = node();
    let line = StratifiedSpace::new(vec![stratum("L", 1, true)], &[]).unwrap();
    let ll = LinkData::new(&line, BTreeMap::new()).unwrap();
    let p = product_space(&ns, &nl, &line, &ll).unwrap();
    let eu = euler_obstruction_links(&p.space, &p.links).unwrap();
    assert_eq!(eu.values[p.space.index_of("0×L").unwrap()], BigInt::from(2));

    let c = product_cc(&p, &CcCoefficients::from_ints(&[-1, -1, -1]), &CcCoefficients::from_ints(&[-1]));
    assert_eq!(c.coeffs, ints(&[1, 1, 1]));

    let pn = product_space(&ns, &nl, &ns, &nl).unwrap();
    let a = ConstructibleFunction::from_ints(&[4, -1, 2]);
    let b = ConstructibleFunction::from_ints(&[0, 3, 1]);
    let lhs = cc_of_function(&pn.space, &pn.links, &product_function(&pn, &a, &b)).unwrap();
    let rhs = product_cc(&pn, &cc_of_function(&ns, &nl, &a).unwrap(), &cc_of_function(&ns, &nl, &b).unwrap());
    assert_eq!(lhs, rhs);
    let eu_n = euler_obstruction_links(&ns, &nl).unwrap();
    assert_eq!(euler_obstruction_links(&pn.space, &pn.links).unwrap(), product_function(&pn, &eu_n, &eu_n));
}

#[test]
fn sebastiani_thom() {
    let y = StratifiedSpace::new(vec![stratum("0", 0, false), stratum("C", 1, true)], &pairs(&[("0", "C")])).unwrap();
    let ly = LinkData::from_names(&y, &[("0", "C", 2)]).unwrap();
    let mg = MilnorData::from_names(&y, "0", &[("C", 3)]).unwrap();
    let z = StratifiedSpace::new(vec![stratum("Z", 1, true)], &[]).unwrap();
    let lz = LinkData::new(&z, BTreeMap::new()).unwrap();
    let mz = MilnorData::from_names(&z, "Z", &[("Z", 2)]).unwrap();
    let eg = relative_euler_obstruction_chi(&y, &ly, &mg).unwrap();
    let ez = relative_euler_obstruction_chi(&z, &lz, &mz).unwrap();
    assert_eq!((eg.clone(), ez.clone()), (BigInt::from(-1), BigInt::from(-1)));
    let p = product_space(&y, &ly, &z, &lz).unwrap();
    let m = product_milnor(&p, &y, &mg, &z, &mz).unwrap();
    assert_eq!(relative_euler_obstruction_chi(&p.space, &p.links, &m).unwrap(), BigInt::from(1));
}

#[test]
fn rejects_malformed_data() {
    assert!(StratifiedSpace::new(vec![stratum("a", 1, false), stratum("b", 1, true)], &pairs(&[("a", "b")])).is_err());
    assert!(StratifiedSpace::new(vec![stratum("a", 0, false)], &[]).is_err());
    let (s, _) = node();
    assert!(LinkData::from_names(&s, &[("0", "b1", 1)]).is_err());
    assert!(LinkData::from_names(&s, &[("0", "b1", 1), ("0", "b2", 1), ("b1", "b2", 0)]).is_err());
    assert!(MilnorData::from_names(&s, "b1", &[("b2", 1)]).is_err());
}

/// A random poset with levels of dimension 0, 1, 2 and link data on it.
fn random_space() -> impl Strategy<Value = (StratifiedSpace, LinkData)> {
    (1usize..4, 1usize..4, 1usize..4, proptest::collection::vec(any::<bool>(), 48), proptest::collection::vec(-3i64..4, 48))
        .prop_map(|(n0, n1, n2, edges, vals)| {
            let mut strata = Vec::new();
            for (lvl, n) in [n0, n1, n2].into_iter().enumerate() {
                for i in 0..n {
                    strata.push(stratum(&format!("s{lvl}_{i}"), lvl, lvl == 2));
                }
            }
            let mut closure = Vec::new();
            let mut e = edges.into_iter().cycle();
            for a in 0..strata.len() {
                for b in 0..strata.len() {
                    if strata[a].dim < strata[b].dim && e.next().unwrap() {
                        closure.push((strata[a].name.clone(), strata[b].name.clone()));
                    }
                }
                if strata[a].dim < 2 {
                    closure.push((strata[a].name.clone(), format!("s2_{}", a % n2)));
                }
            }
            let space = StratifiedSpace::new(strata, &closure).unwrap();
            let mut v = vals.into_iter().cycle();
            let chi = space.closure_pairs().into_iter().map(|k| (k, BigInt::from(v.next().unwrap()))).collect();
            let links = LinkData::new(&space, chi).unwrap();
            (space, links)
        })
}

proptest! {
    #[test]
    fn bdk_round_trip((s, l) in random_space(), vals in proptest::collection::vec(-20i64..20, 9)) {
        let alpha = ConstructibleFunction::from_ints(&vals[..s.len()]);
        let c = cc_of_function(&s, &l, &alpha).unwrap();
        prop_assert_eq!(function_from_cc(&s, &l, &c).unwrap(), alpha);
    }

    #[test]
    fn characteristic_function_is_euler_obstruction((s, l) in random_space()) {
        let k = characteristic_function(&s, &l).unwrap();
        prop_assert_eq!(&k, &euler_obstruction_links(&s, &l).unwrap());
        let c = cc_of_function(&s, &l, &k).unwrap();
        for (i, st) in s.strata().iter().enumerate() {
            let want = if st.is_component_open() { if st.dim % 2 == 0 { 1 } else { -1 } } else { 0 };
            prop_assert_eq!(c.coeffs[i].clone(), BigInt::from(want));
        }
    }

    #[test]
    fn generic_linear_relative_vanishes((s, l) in random_space(), pick in 0usize..9) {
        let p = pick % s.len();
        prop_assume!(!s.stratum(p).is_component_open());
        let m = MilnorData::from_links(&s, &l, p);
        prop_assert_eq!(relative_euler_obstruction_chi(&s, &l, &m).unwrap(), BigInt::from(0));
    }
}
