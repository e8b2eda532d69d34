//! Constructible functions and characteristic-cycle coefficients on a
//! stratification poset.

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub name: String,
    pub dim: usize,
    /// Open dense in an irreducible component of the given dimension.
    pub component_dim: Option<usize>,
}

impl Stratum {
    pub fn is_component_open(&self) -> bool {
        self.component_dim.is_some()
    }
}

/// Strata with the closure order `S₀ ≺ S` (`S₀ ⊆ closure(S)`), stored
/// transitively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedSpace {
    strata: Vec<Stratum>,
    index: HashMap<String, usize>,
    above: Vec<BTreeSet<usize>>,
}

impl StratifiedSpace {
    pub fn new(strata: Vec<Stratum>, closure: &[(String, String)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in strata.iter().enumerate() {
            if index.insert(s.name.clone(), i).is_some() {
                return Err(Error::Strat(format!("duplicate stratum '{}'", s.name)));
            }
            if let Some(d) = s.component_dim {
                if d != s.dim {
                    return Err(Error::Strat(format!("stratum '{}' has dimension {} but its component has {d}", s.name, s.dim)));
                }
            }
        }
        let mut above = vec![BTreeSet::new(); strata.len()];
        for (a, b) in closure {
            let ia = *index.get(a).ok_or_else(|| Error::Strat(format!("unknown stratum '{a}'")))?;
            let ib = *index.get(b).ok_or_else(|| Error::Strat(format!("unknown stratum '{b}'")))?;
            if strata[ia].dim >= strata[ib].dim {
                return Err(Error::Strat(format!("closure pair ('{a}', '{b}') does not increase dimension")));
            }
            above[ia].insert(ib);
        }
        // Strata sorted by decreasing dimension give a topological order.
        let mut order: Vec<usize> = (0..strata.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(strata[i].dim));
        for &i in &order {
            let direct: Vec<usize> = above[i].iter().copied().collect();
            for j in direct {
                let up = above[j].clone();
                above[i].extend(up);
            }
        }
        for (i, s) in strata.iter().enumerate() {
            if s.is_component_open() && !above[i].is_empty() {
                return Err(Error::Strat(format!("component-open stratum '{}' lies in the closure of another stratum", s.name)));
            }
            if !s.is_component_open() && !above[i].iter().any(|&j| strata[j].is_component_open()) {
                return Err(Error::Strat(format!("stratum '{}' is not below any component-open stratum", s.name)));
            }
        }
        Ok(StratifiedSpace { strata, index, above })
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &Stratum {
        &self.strata[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::Strat(format!("unknown stratum '{name}'")))
    }

    /// `S₀ ≺ S`.
    pub fn precedes(&self, s0: usize, s: usize) -> bool {
        self.above[s0].contains(&s)
    }

    /// Strata strictly above `s0`.
    pub fn above(&self, s0: usize) -> impl Iterator<Item = usize> + '_ {
        self.above[s0].iter().copied()
    }

    /// Indices by decreasing dimension, ties by position.
    pub fn downward(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.strata.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(self.strata[i].dim), i));
        order
    }

    pub fn closure_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| self.above(i).map(move |j| (i, j))).collect()
    }
}

fn sign(d: usize) -> BigInt {
    if d % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `χ(L_{X,p₀} ∩ S)` for `p₀ ∈ S₀ ≺ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkData {
    chi: BTreeMap<(usize, usize), BigInt>,
}

impl LinkData {
    /// Entries must be given exactly on the closure pairs.
    pub fn new(space: &StratifiedSpace, chi: BTreeMap<(usize, usize), BigInt>) -> Result<Self> {
        for &(a, b) in chi.keys() {
            if a >= space.len() || b >= space.len() || !space.precedes(a, b) {
                return Err(Error::Strat(format!("link entry for a pair outside the closure order (#{a}, #{b})")));
            }
        }
        if let Some((a, b)) = space.closure_pairs().into_iter().find(|k| !chi.contains_key(k)) {
            return Err(Error::Strat(format!(
                "missing link entry for ('{}', '{}')",
                space.stratum(a).name,
                space.stratum(b).name
            )));
        }
        Ok(LinkData { chi })
    }

    pub fn from_names(space: &StratifiedSpace, entries: &[(&str, &str, i64)]) -> Result<Self> {
        let mut chi = BTreeMap::new();
        for (a, b, v) in entries {
            chi.insert((space.index_of(a)?, space.index_of(b)?), BigInt::from(*v));
        }
        Self::new(space, chi)
    }

    pub fn chi(&self, s0: usize, s: usize) -> BigInt {
        self.chi.get(&(s0, s)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), BigInt> {
        &self.chi
    }
}

/// `χ(F_{f-f(p),p} ∩ S)` for `p` in the point stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorData {
    pub point_stratum: usize,
    chi: Vec<BigInt>,
}

impl MilnorData {
    /// Strata not above or equal to the point stratum must carry 0.
    pub fn new(space: &StratifiedSpace, point_stratum: usize, values: BTreeMap<usize, BigInt>) -> Result<Self> {
        let mut chi = vec![BigInt::zero(); space.len()];
        for (s, v) in values {
            if s >= space.len() {
                return Err(Error::Strat(format!("Milnor entry for unknown stratum #{s}")));
            }
            if s != point_stratum && !space.precedes(point_stratum, s) && !v.is_zero() {
                return Err(Error::Strat(format!(
                    "Milnor entry for '{}' which does not contain '{}' in its closure",
                    space.stratum(s).name,
                    space.stratum(point_stratum).name
                )));
            }
            chi[s] = v;
        }
        Ok(MilnorData { point_stratum, chi })
    }

    pub fn from_names(space: &StratifiedSpace, point: &str, entries: &[(&str, i64)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (s, v) in entries {
            values.insert(space.index_of(s)?, BigInt::from(*v));
        }
        Self::new(space, space.index_of(point)?, values)
    }

    /// The Milnor data of a generic linear form: the complex link.
    pub fn from_links(space: &StratifiedSpace, links: &LinkData, point_stratum: usize) -> Self {
        let chi = (0..space.len()).map(|s| links.chi(point_stratum, s)).collect();
        MilnorData { point_stratum, chi }
    }

    pub fn chi(&self, s: usize) -> &BigInt {
        &self.chi[s]
    }
}

/// One integer per stratum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstructibleFunction {
    pub values: Vec<BigInt>,
}

/// Characteristic-cycle coefficients `c_S`, one per stratum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CcCoefficients {
    pub coeffs: Vec<BigInt>,
}

impl ConstructibleFunction {
    pub fn constant(space: &StratifiedSpace, v: i64) -> Self {
        ConstructibleFunction { values: vec![BigInt::from(v); space.len()] }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        ConstructibleFunction { values: v.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn zero(space: &StratifiedSpace) -> Self {
        Self::constant(space, 0)
    }
}

impl CcCoefficients {
    pub fn from_ints(v: &[i64]) -> Self {
        CcCoefficients { coeffs: v.iter().map(|&x| BigInt::from(x)).collect() }
    }
}

fn check_len(space: &StratifiedSpace, n: usize) -> Result<()> {
    if n != space.len() {
        return Err(Error::Strat(format!("expected {} values, got {n}", space.len())));
    }
    Ok(())
}

/// `c_{S₀} = (-1)^{dim S₀}(α(S₀) - Σ_{S₀≺S} χ(L_{S₀} ∩ S)·α(S))`.
pub fn cc_of_function(space: &StratifiedSpace, links: &LinkData, alpha: &ConstructibleFunction) -> Result<CcCoefficients> {
    check_len(space, alpha.values.len())?;
    let coeffs = (0..space.len())
        .map(|s0| {
            let mut v = alpha.values[s0].clone();
            for s in space.above(s0) {
                v -= links.chi(s0, s) * &alpha.values[s];
            }
            sign(space.stratum(s0).dim) * v
        })
        .collect();
    Ok(CcCoefficients { coeffs })
}

/// `Eu_{S₀}(closure S)` for all pairs, from the link recursion restricted to
/// each closure.
pub fn closure_euler_obstructions(space: &StratifiedSpace, links: &LinkData) -> Vec<Vec<BigInt>> {
    let n = space.len();
    let mut e = vec![vec![BigInt::zero(); n]; n];
    for s in 0..n {
        e[s][s] = BigInt::one();
    }
    for s0 in space.downward() {
        for s in space.above(s0).collect::<Vec<_>>() {
            let mut v = BigInt::zero();
            for mid in space.above(s0) {
                if mid == s || space.precedes(mid, s) {
                    v += links.chi(s0, mid) * &e[mid][s];
                }
            }
            e[s0][s] = v;
        }
    }
    e
}

/// `α(p) = Σ_S (-1)^{dim S} c_S Eu_p(closure S)`.
pub fn function_from_cc(space: &StratifiedSpace, links: &LinkData, c: &CcCoefficients) -> Result<ConstructibleFunction> {
    check_len(space, c.coeffs.len())?;
    let e = closure_euler_obstructions(space, links);
    let values = (0..space.len())
        .map(|s0| {
            (0..space.len())
                .filter(|&s| s == s0 || space.precedes(s0, s))
                .map(|s| sign(space.stratum(s).dim) * &c.coeffs[s] * &e[s0][s])
                .sum()
        })
        .collect();
    Ok(ConstructibleFunction { values })
}

/// Eu per stratum by the complex-link recursion.
pub fn euler_obstruction_links(space: &StratifiedSpace, links: &LinkData) -> Result<ConstructibleFunction> {
    let mut eu = vec![BigInt::zero(); space.len()];
    for s0 in space.downward() {
        let st = space.stratum(s0);
        if st.is_component_open() {
            eu[s0] = BigInt::one();
            continue;
        }
        if space.above(s0).next().is_none() {
            return Err(Error::Strat(format!("stratum '{}' has no higher strata and is not component-open", st.name)));
        }
        eu[s0] = space.above(s0).map(|s| links.chi(s0, s) * &eu[s]).sum();
    }
    Ok(ConstructibleFunction { values: eu })
}

/// The stalk function whose coefficients are `(-1)^{dim}` on component-open
/// strata and zero elsewhere, by downward triangular solve.
pub fn characteristic_function(space: &StratifiedSpace, links: &LinkData) -> Result<ConstructibleFunction> {
    let mut alpha = vec![BigInt::zero(); space.len()];
    for s0 in space.downward() {
        let st = space.stratum(s0);
        let target = if st.is_component_open() { sign(st.dim) } else { BigInt::zero() };
        let mut v = sign(st.dim) * target;
        for s in space.above(s0) {
            v += links.chi(s0, s) * &alpha[s];
        }
        alpha[s0] = v;
    }
    Ok(ConstructibleFunction { values: alpha })
}

/// `Eu_p f = Eu_p X - Σ_S χ(F ∩ S)·Eu_{p_S} X`.
pub fn relative_euler_obstruction_chi(space: &StratifiedSpace, links: &LinkData, milnor: &MilnorData) -> Result<BigInt> {
    let eu = euler_obstruction_links(space, links)?;
    let s0 = milnor.point_stratum;
    let mut v = eu.values[s0].clone();
    for s in 0..space.len() {
        v -= milnor.chi(s) * &eu.values[s];
    }
    Ok(v)
}

/// `(χψ, χφ)` with `χψ = Σ_S χ(F ∩ S)·α(S)` and `χφ = χψ - α(S₀)`.
pub fn nearby_vanishing_chi(space: &StratifiedSpace, alpha: &ConstructibleFunction, milnor: &MilnorData) -> Result<(BigInt, BigInt)> {
    check_len(space, alpha.values.len())?;
    let psi: BigInt = (0..space.len()).map(|s| milnor.chi(s) * &alpha.values[s]).sum();
    let phi = &psi - &alpha.values[milnor.point_stratum];
    Ok((psi, phi))
}

/// `CC(F[j]) = (-1)^j CC(F)`.
pub fn shift(c: &CcCoefficients, j: i64) -> CcCoefficients {
    let s = if j.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    CcCoefficients { coeffs: c.coeffs.iter().map(|x| x * &s).collect() }
}

pub fn add(a: &CcCoefficients, b: &CcCoefficients) -> Result<CcCoefficients> {
    if a.coeffs.len() != b.coeffs.len() {
        return Err(Error::Strat("coefficient vectors over different spaces".into()));
    }
    Ok(CcCoefficients { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() })
}

/// `α_{Y∪Z} = α_Y + α_Z - α_{Y∩Z}` over a common refinement.
pub fn union(y: &ConstructibleFunction, z: &ConstructibleFunction, yz: &ConstructibleFunction) -> Result<ConstructibleFunction> {
    if y.values.len() != z.values.len() || y.values.len() != yz.values.len() {
        return Err(Error::Strat("functions over different spaces".into()));
    }
    let values = (0..y.values.len()).map(|i| &y.values[i] + &z.values[i] - &yz.values[i]).collect();
    Ok(ConstructibleFunction { values })
}

/// Coefficients of the strata whose closure contains `s0`, keyed by name.
/// On a normal slice through `s0` these are the slice coefficients times
/// `(-1)^{dim S₀}`.
pub fn slice(space: &StratifiedSpace, c: &CcCoefficients, s0: usize) -> BTreeMap<String, BigInt> {
    (0..space.len())
        .filter(|&s| s == s0 || space.precedes(s0, s))
        .map(|s| (space.stratum(s).name.clone(), c.coeffs[s].clone()))
        .collect()
}

/// Product stratification, strata named `a×b` in row-major order.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    pub space: StratifiedSpace,
    pub links: LinkData,
    left_len: usize,
    right_len: usize,
}

impl ProductSpace {
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.right_len + b
    }

    pub fn factors(&self, i: usize) -> (usize, usize) {
        (i / self.right_len, i % self.right_len)
    }

    pub fn left_len(&self) -> usize {
        self.left_len
    }
}

/// `δ(S₀,S) - χ(L_{S₀} ∩ S)` for `S₀ ≼ S`.
fn reduced_link(space: &StratifiedSpace, links: &LinkData, s0: usize, s: usize) -> BigInt {
    if s0 == s {
        BigInt::one()
    } else if space.precedes(s0, s) {
        -links.chi(s0, s)
    } else {
        BigInt::zero()
    }
}

/// Builds the product space. Link data uses the multiplicative rule
/// `δ - χ_{X×Y} = (δ - χ_X)(δ - χ_Y)`.
pub fn product_space(x: &StratifiedSpace, lx: &LinkData, y: &StratifiedSpace, ly: &LinkData) -> Result<ProductSpace> {
    let mut strata = Vec::new();
    for a in x.strata() {
        for b in y.strata() {
            strata.push(Stratum {
                name: format!("{}×{}", a.name, b.name),
                dim: a.dim + b.dim,
                component_dim: match (a.component_dim, b.component_dim) {
                    (Some(p), Some(q)) => Some(p + q),
                    _ => None,
                },
            });
        }
    }
    let m = y.len();
    let mut closure = Vec::new();
    for a0 in 0..x.len() {
        for b0 in 0..m {
            for a in 0..x.len() {
                for b in 0..m {
                    let ra = a == a0 || x.precedes(a0, a);
                    let rb = b == b0 || y.precedes(b0, b);
                    if ra && rb && (a, b) != (a0, b0) {
                        closure.push((strata[a0 * m + b0].name.clone(), strata[a * m + b].name.clone()));
                    }
                }
            }
        }
    }
    let space = StratifiedSpace::new(strata, &closure)?;
    let mut chi = BTreeMap::new();
    for (i, j) in space.closure_pairs() {
        let (a0, b0) = (i / m, i % m);
        let (a, b) = (j / m, j % m);
        chi.insert((i, j), -(reduced_link(x, lx, a0, a) * reduced_link(y, ly, b0, b)));
    }
    let links = LinkData::new(&space, chi)?;
    Ok(ProductSpace { space, links, left_len: x.len(), right_len: m })
}

/// `(α ⊠ β)(S×S') = α(S)·β(S')`.
pub fn product_function(p: &ProductSpace, a: &ConstructibleFunction, b: &ConstructibleFunction) -> ConstructibleFunction {
    let values = (0..p.space.len())
        .map(|i| {
            let (x, y) = p.factors(i);
            &a.values[x] * &b.values[y]
        })
        .collect();
    ConstructibleFunction { values }
}

/// `c_{S×S'} = c_S·c_{S'}`.
pub fn product_cc(p: &ProductSpace, a: &CcCoefficients, b: &CcCoefficients) -> CcCoefficients {
    let coeffs = (0..p.space.len())
        .map(|i| {
            let (x, y) = p.factors(i);
            &a.coeffs[x] * &b.coeffs[y]
        })
        .collect();
    CcCoefficients { coeffs }
}

/// Milnor data of `f ⊞ g`, by `δ - χ_F` being multiplicative.
pub fn product_milnor(p: &ProductSpace, x: &StratifiedSpace, mf: &MilnorData, y: &StratifiedSpace, mg: &MilnorData) -> Result<MilnorData> {
    let reduced = |space: &StratifiedSpace, m: &MilnorData, s: usize| -> BigInt {
        let d = if s == m.point_stratum { BigInt::one() } else { BigInt::zero() };
        if s == m.point_stratum || space.precedes(m.point_stratum, s) {
            d - m.chi(s)
        } else {
            BigInt::zero()
        }
    };
    let point = p.index(mf.point_stratum, mg.point_stratum);
    let mut values = BTreeMap::new();
    for i in 0..p.space.len() {
        let (a, b) = p.factors(i);
        let d = if i == point { BigInt::one() } else { BigInt::zero() };
        values.insert(i, d - reduced(x, mf, a) * reduced(y, mg, b));
    }
    MilnorData::new(&p.space, point, values)
}
