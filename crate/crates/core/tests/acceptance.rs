//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eulob::conormal::{cnr_critical_locus, conormal_cycle, im_df_ideal, VarietyPresentation};
use eulob::cycles::{decompose_ideal, ComponentCycle};
use eulob::levogel::{
    build_tower, isolated_cnr_euler, levogel_numbers, relative_euler_obstruction_geometric, Verdict,
};
use eulob::poly::{int_point, parse_polynomial, Ideal, Polynomial, VariableContext};
use eulob::strat::*;

type Outcome = Result<(), String>;

fn ensure(cond: bool, what: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ctx(names: &[&str]) -> Arc<VariableContext> {
    VariableContext::new(names).unwrap()
}

fn ideal(c: &Arc<VariableContext>, gens: &[&str]) -> Ideal {
    Ideal::parse(c, gens).unwrap()
}

fn prime(c: &Arc<VariableContext>, gens: &[&str], m: i64) -> ComponentCycle {
    ComponentCycle::from_prime(ideal(c, gens), m).unwrap()
}

fn poly(c: &Arc<VariableContext>, s: &str) -> Polynomial {
    parse_polynomial(c, s).unwrap()
}

fn stratum(name: &str, dim: usize, open: bool) -> Stratum {
    Stratum { name: name.into(), dim, component_dim: open.then_some(dim) }
}

fn space(strata: Vec<Stratum>, closure: &[(&str, &str)]) -> StratifiedSpace {
    let pairs: Vec<(String, String)> = closure.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    StratifiedSpace::new(strata, &pairs).unwrap()
}

fn cusp_line() -> (VarietyPresentation, Polynomial) {
    let b = ctx(&["t", "x", "y"]);
    (VarietyPresentation::parse(&b, &["y^2-x^3"]).unwrap(), poly(&b, "2*y-3*t*x+t^3"))
}

fn two_planes(f: &str) -> (VarietyPresentation, Polynomial) {
    let b = ctx(&["x", "y", "z"]);
    (VarietyPresentation::parse(&b, &["x*y"]).unwrap(), poly(&b, f))
}

/// Lowest total degree of `f` after moving `p` to the origin.
fn order_at(f: &Polynomial, p: &[i64]) -> u64 {
    let t = f.translate(&int_point(p));
    t.terms().map(|(m, _)| m.degree()).min().unwrap_or(0)
}

fn criterion_1() -> Outcome {
    let (x, f) = cusp_line();
    let conormal = conormal_cycle(&x, 0).map_err(|e| e.to_string())?;
    let cot = conormal.context().clone();
    ensure(conormal.components().len() == 1, "conormal has one component")?;
    let target = ideal(&cot, &["y^2-x^3", "w0", "2*w1*y+3*w2*x^2", "4*w1^2-9*w2^2*x"]);
    ensure(conormal.components()[0].prime.radical_equals(&target), "conormal radical")?;

    let ddagger = decompose_ideal(&ideal(&cot, &["y^2-x^3", "w0", "w1*y+3*x^2", "w2-2"]), 0).map_err(|e| e.to_string())?;
    let graph = prime(&cot, &["27*y+w1^3", "9*x-w1^2", "w0", "w2-2"], 1);
    ensure(ddagger.same_as(&graph.add(&prime(&cot, &["x", "y", "w0", "w2-2"], 3))), format!("(‡) decomposition {ddagger}"))?;

    let tower = build_tower(&x, &f, 0).map_err(|e| e.to_string())?;
    ensure(tower.gamma[&2].same_as(&graph), "Γ̂²")?;
    ensure(tower.lambda_hat[&2].is_zero(), "Λ̂² = 0")?;
    ensure(tower.gamma[&1].is_zero(), "Γ̂¹ = 0")?;
    ensure(tower.lambda_hat[&1].same_as(&prime(&cot, &["y-t^3", "x-t^2", "w0", "w1+3*t", "w2-2"], 1)), "Λ̂¹")?;
    ensure(tower.lambda[&1].same_as(&prime(x.context(), &["y-t^3", "x-t^2"], 1)), "Λ¹")?;
    let nums = levogel_numbers(&tower, &int_point(&[0, 0, 0])).map_err(|e| e.to_string())?;
    ensure(nums.values[&1] == 1, "λ¹ = 1")?;
    ensure(nums.values.iter().all(|(k, v)| *k == 1 || *v == 0), "other λ vanish")?;
    let r = relative_euler_obstruction_geometric(&x, &f, &int_point(&[0, 0, 0]), 0).map_err(|e| e.to_string())?;
    ensure(r.value == -1, format!("Eu = {}", r.value))?;
    ensure(r.prepolarity == Verdict::Verified, format!("prepolarity {:?}", r.prepolarity))?;

    let dagger = decompose_ideal(&ideal(&cot, &["y^2-x^3", "w0", "2*w1*y+3*w2*x^2"]), 0).map_err(|e| e.to_string())?;
    let m = dagger
        .components()
        .iter()
        .find(|c| c.prime.equals(&ideal(&cot, &["x", "y", "w0"])))
        .map(|c| c.multiplicity);
    println!("  info: (†) multiplicity m on V(x, y, w0) computes to {m:?}");
    Ok(())
}

fn criterion_2() -> Outcome {
    let (x, f) = two_planes("x+y^2+y*z");
    let b = x.context().clone();
    let locus = cnr_critical_locus(&x, &f, 0).map_err(|e| e.to_string())?;
    ensure(locus.union.equals(&ideal(&b, &["x", "y", "z"])), "Σ_cnr = {0}")?;
    let conormal = conormal_cycle(&x, 0).map_err(|e| e.to_string())?;
    let imdf = im_df_ideal(&f).map_err(|e| e.to_string())?;
    let cot = conormal.context().clone();
    for c in conormal.components() {
        let meets = !c.prime.sum(&imdf).is_unit();
        let is_x = c.prime.equals(&ideal(&cot, &["x", "w1", "w2"]));
        ensure(meets == is_x, format!("conormal component {} meets im(df) = {meets}", c.prime))?;
    }
    let p = int_point(&[0, 0, 0]);
    ensure(isolated_cnr_euler(&x, &f, &p, 0).map_err(|e| e.to_string())? == 1, "isolated formula = 1")?;
    let r = relative_euler_obstruction_geometric(&x, &f, &p, 0).map_err(|e| e.to_string())?;
    ensure(r.value == 1, format!("geometric Eu = {}", r.value))
}

/// Colength of `(∂f/∂x, ∂f/∂y)` when both partials are pure powers:
/// the monomials `x^a y^b` with `a < p`, `b < q`.
fn pure_power_milnor(f: &Polynomial) -> Option<u64> {
    let mut exps = Vec::new();
    for (i, d) in f.gradient().iter().enumerate() {
        if d.num_terms() != 1 {
            return None;
        }
        let (m, _) = d.terms().next()?;
        let e = m.exponents();
        if e.iter().enumerate().any(|(j, &k)| j != i && k != 0) {
            return None;
        }
        exps.push(e[i] as u64);
    }
    Some(exps.iter().product())
}

fn criterion_3() -> Outcome {
    let b = ctx(&["x", "y"]);
    let none: [&str; 0] = [];
    let x = VarietyPresentation::parse(&b, &none).unwrap();
    for (fs, expected) in [("x^2+y^3", 2), ("x^3+y^3", 4)] {
        let f = poly(&b, fs);
        let mu = pure_power_milnor(&f).ok_or("oracle does not apply")? as i64;
        ensure(mu == expected, format!("oracle μ({fs}) = {mu}"))?;
        let r = relative_euler_obstruction_geometric(&x, &f, &int_point(&[0, 0]), 0).map_err(|e| e.to_string())?;
        ensure(r.value == mu, format!("Eu({fs}) = {} vs (-1)^2 μ = {mu}", r.value))?;
    }
    Ok(())
}

fn random_linear(c: &Arc<VariableContext>, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for name in c.names() {
        let mut a: i64 = 0;
        while a == 0 {
            a = rng.gen_range(-9..=9);
        }
        terms.push(format!("({a})*{name}"));
    }
    terms.push(format!("({})", rng.gen_range(-9..=9)));
    poly(c, &terms.join("+"))
}

fn criterion_4() -> Outcome {
    for seed in [11u64, 12] {
        for (x, label) in [(two_planes("x").0, "V(xy)"), (cusp_line().0, "cusp×ℂ")] {
            let f = random_linear(x.context(), seed);
            let p = int_point(&vec![0; x.context().arity()]);
            let r = relative_euler_obstruction_geometric(&x, &f, &p, seed).map_err(|e| e.to_string())?;
            ensure(r.value == 0, format!("{label}, f = {f}: Eu = {}", r.value))?;
        }
    }
    Ok(())
}

fn random_poset(rng: &mut ChaCha8Rng) -> (StratifiedSpace, LinkData) {
    let counts = [rng.gen_range(1..4), rng.gen_range(1..4), rng.gen_range(1..4)];
    let mut strata = Vec::new();
    for (lvl, &n) in counts.iter().enumerate() {
        for i in 0..n {
            strata.push(stratum(&format!("s{lvl}_{i}"), lvl, lvl == 2));
        }
    }
    let mut closure = Vec::new();
    for a in 0..strata.len() {
        if strata[a].dim == 2 {
            continue;
        }
        closure.push((strata[a].name.clone(), format!("s2_{}", rng.gen_range(0..counts[2]))));
        for b in 0..strata.len() {
            if strata[a].dim < strata[b].dim && rng.gen_bool(0.4) {
                closure.push((strata[a].name.clone(), strata[b].name.clone()));
            }
        }
    }
    let s = StratifiedSpace::new(strata, &closure).unwrap();
    let chi = s.closure_pairs().into_iter().map(|k| (k, BigInt::from(rng.gen_range(-3..4)))).collect();
    let l = LinkData::new(&s, chi).unwrap();
    (s, l)
}

fn criterion_5() -> Outcome {
    let node = space(vec![stratum("0", 0, false), stratum("b1", 1, true), stratum("b2", 1, true)], &[("0", "b1"), ("0", "b2")]);
    let node_links = LinkData::from_names(&node, &[("0", "b1", 1), ("0", "b2", 1)]).unwrap();
    let eu = euler_obstruction_links(&node, &node_links).map_err(|e| e.to_string())?;
    ensure(eu.values[0] == BigInt::from(2), "node Eu₀ = 2")?;

    let planes = space(
        vec![stratum("0", 0, false), stratum("A", 1, false), stratum("P1", 2, true), stratum("P2", 2, true)],
        &[("0", "A"), ("A", "P1"), ("A", "P2")],
    );
    let pl = LinkData::from_names(&planes, &[("0", "A", 1), ("0", "P1", 0), ("0", "P2", 0), ("A", "P1", 1), ("A", "P2", 1)])
        .unwrap();
    let eu = euler_obstruction_links(&planes, &pl).map_err(|e| e.to_string())?;
    ensure(eu.values[0] == BigInt::from(2), format!("V(xy) Eu₀ = {}", eu.values[0]))?;
    // χ(L) + Σ_S mult_p(closure S)·(mult_{p_S} X - 1), multiplicities from the equations
    let b = ctx(&["x", "y", "z"]);
    let xy = poly(&b, "x*y");
    let link_chi: BigInt = ["A", "P1", "P2"].iter().map(|s| pl.chi(0, planes.index_of(s).unwrap())).sum();
    let mult_axis_at_0 = ideal(&b, &["x", "y"]).with(&[poly(&b, "z")]).local_colength(&int_point(&[0, 0, 0])).unwrap();
    let mult_x_on_axis = order_at(&xy, &[0, 0, 1]);
    let surface = link_chi + BigInt::from(mult_axis_at_0 * (mult_x_on_axis - 1));
    ensure(surface == eu.values[0], format!("surface formula gives {surface}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut posets = vec![(node.clone(), node_links.clone()), (planes.clone(), pl.clone())];
    for _ in 0..100 {
        let (s, l) = random_poset(&mut rng);
        let alpha = ConstructibleFunction {
            values: (0..s.len()).map(|_| BigInt::from(rng.gen_range(-50..50))).collect(),
        };
        let c = cc_of_function(&s, &l, &alpha).map_err(|e| e.to_string())?;
        ensure(function_from_cc(&s, &l, &c).map_err(|e| e.to_string())? == alpha, "BDK round trip")?;
        posets.push((s, l));
    }
    for (s, l) in &posets {
        let k = characteristic_function(s, l).map_err(|e| e.to_string())?;
        ensure(k == euler_obstruction_links(s, l).map_err(|e| e.to_string())?, "characteristic function = Eu")?;
    }
    Ok(())
}

/// Stratification of cusp×ℂ = V(y²-x³) ⊂ ℂ³ near 0 and Milnor data of
/// f = 2y - 3tx + t³:
/// - A is the t-axis V(x, y), Reg the rest;
/// - χ(L_A ∩ Reg) = 2: the normal slice is a cusp, and a generic line meets
///   it in 2 points near 0;
/// - χ(F ∩ A) = 3: f restricted to A is t³;
/// - χ(F ∩ Reg) = -3: the Milnor fiber F of f on X has χ(F) = 0.
fn criterion_6() -> Outcome {
    let s = space(vec![stratum("A", 1, false), stratum("Reg", 2, true)], &[("A", "Reg")]);
    let l = LinkData::from_names(&s, &[("A", "Reg", 2)]).unwrap();
    let m = MilnorData::from_names(&s, "A", &[("A", 3), ("Reg", -3)]).unwrap();
    let combinatorial = relative_euler_obstruction_chi(&s, &l, &m).map_err(|e| e.to_string())?;
    let (x, f) = cusp_line();
    let geometric = relative_euler_obstruction_geometric(&x, &f, &int_point(&[0, 0, 0]), 0).map_err(|e| e.to_string())?;
    ensure(
        combinatorial == BigInt::from(geometric.value) && geometric.value == -1,
        format!("combinatorial {combinatorial}, geometric {}", geometric.value),
    )
}

fn criterion_7() -> Outcome {
    let b2 = ctx(&["x", "y"]);
    let cusp = poly(&b2, "y^2-x^3");
    let mult = order_at(&cusp, &[0, 0]) as i64;
    let inter = ideal(&b2, &["y^2-x^3", "y"]).local_colength(&int_point(&[0, 0])).unwrap() as i64;
    ensure((mult, inter) == (2, 3), format!("mult {mult}, (Y·V(g)) {inter}"))?;
    let bexp = 2;

    let y = space(vec![stratum("0", 0, false), stratum("C", 1, true)], &[("0", "C")]);
    let ly = LinkData::from_names(&y, &[("0", "C", mult)]).unwrap();
    let mg = MilnorData::from_names(&y, "0", &[("C", inter)]).unwrap();
    let z = space(vec![stratum("Z", 1, true)], &[]);
    let lz = LinkData::new(&z, BTreeMap::new()).unwrap();
    let mz = MilnorData::from_names(&z, "Z", &[("Z", bexp)]).unwrap();
    let eg = relative_euler_obstruction_chi(&y, &ly, &mg).map_err(|e| e.to_string())?;
    let ez = relative_euler_obstruction_chi(&z, &lz, &mz).map_err(|e| e.to_string())?;
    let formula = BigInt::from((mult - inter) * (1 - bexp));
    ensure(&eg * &ez == formula && formula == BigInt::from(1), format!("product {eg}·{ez}"))?;
    let prod = product_space(&y, &ly, &z, &lz).map_err(|e| e.to_string())?;
    let pm = product_milnor(&prod, &y, &mg, &z, &mz).map_err(|e| e.to_string())?;
    let on_product = relative_euler_obstruction_chi(&prod.space, &prod.links, &pm).map_err(|e| e.to_string())?;
    ensure(on_product == formula, format!("product stratification gives {on_product}"))?;

    let b3 = ctx(&["x", "y", "z"]);
    let x = VarietyPresentation::parse(&b3, &["y^2-x^3"]).unwrap();
    let r = relative_euler_obstruction_geometric(&x, &poly(&b3, "y+z^2"), &int_point(&[0, 0, 0]), 0)
        .map_err(|e| e.to_string())?;
    ensure(BigInt::from(r.value) == formula, format!("geometric {}", r.value))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let c = CcCoefficients { coeffs: (0..5).map(|_| BigInt::from(rng.gen_range(-9..10))).collect() };
        let j: i64 = rng.gen_range(-6..7);
        let expected: Vec<BigInt> = c.coeffs.iter().map(|x| if j % 2 == 0 { x.clone() } else { -x }).collect();
        ensure(shift(&c, j).coeffs == expected, "shift sign rule")?;
        ensure(shift(&shift(&c, j), -j) == c, "shift inverse")?;
    }

    let planes = space(
        vec![stratum("0", 0, false), stratum("A", 1, false), stratum("P1", 2, true), stratum("P2", 2, true)],
        &[("0", "A"), ("A", "P1"), ("A", "P2")],
    );
    let pl = LinkData::from_names(&planes, &[("0", "A", 1), ("0", "P1", 0), ("0", "P2", 0), ("A", "P1", 1), ("A", "P2", 1)])
        .unwrap();
    // P1 ⊂ V(x), P2 ⊂ V(y); the axis and the origin lie in both.
    let ay = ConstructibleFunction::from_ints(&[1, 1, 1, 0]);
    let az = ConstructibleFunction::from_ints(&[1, 1, 0, 1]);
    let ayz = ConstructibleFunction::from_ints(&[1, 1, 0, 0]);
    let ax = union(&ay, &az, &ayz).map_err(|e| e.to_string())?;
    ensure(ax == ConstructibleFunction::constant(&planes, 1), "union of indicators")?;
    let cc = |a: &ConstructibleFunction| cc_of_function(&planes, &pl, a).unwrap();
    let rhs = add(&add(&cc(&ay), &cc(&az)).unwrap(), &shift(&cc(&ayz), 1)).unwrap();
    ensure(cc(&ax) == rhs, "CC of the union")?;

    let node = space(vec![stratum("0", 0, false), stratum("b1", 1, true), stratum("b2", 1, true)], &[("0", "b1"), ("0", "b2")]);
    let nl = LinkData::from_names(&node, &[("0", "b1", 1), ("0", "b2", 1)]).unwrap();
    let prod = product_space(&node, &nl, &node, &nl).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let a = ConstructibleFunction { values: (0..3).map(|_| BigInt::from(rng.gen_range(-9..10))).collect() };
        let b = ConstructibleFunction { values: (0..3).map(|_| BigInt::from(rng.gen_range(-9..10))).collect() };
        let lhs = cc_of_function(&prod.space, &prod.links, &product_function(&prod, &a, &b)).unwrap();
        let rhs = product_cc(&prod, &cc_of_function(&node, &nl, &a).unwrap(), &cc_of_function(&node, &nl, &b).unwrap());
        ensure(lhs == rhs, "product coefficients multiply")?;
    }
    let minus_one = CcCoefficients::from_ints(&[-1]);
    let line = space(vec![stratum("L", 1, true)], &[]);
    let ll = LinkData::new(&line, BTreeMap::new()).unwrap();
    let pr = product_space(&line, &ll, &line, &ll).map_err(|e| e.to_string())?;
    ensure(product_cc(&pr, &minus_one, &minus_one).coeffs == vec![BigInt::from(1)], "(-1)·(-1) = 1")
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("cusp×ℂ end to end", criterion_1),
        ("V(xy) with f = x + y² + yz", criterion_2),
        ("smooth Milnor identity", criterion_3),
        ("generic linear vanishing", criterion_4),
        ("combinatorial suite", criterion_5),
        ("pipeline agreement on cusp×ℂ", criterion_6),
        ("Sebastiani–Thom product", criterion_7),
        ("CC algebra properties", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
