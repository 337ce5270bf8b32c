//! Sum-of-squares program modeling and compilation to semidefinite form.
//!
//! A program maximizes a linear functional of scalar decision variables
//! subject to constraints "this polynomial expression, affine in the
//! variables, is a sum of squares". Compilation parameterizes one Gram
//! matrix per constraint over a monomial basis of half the degree bound,
//! eliminates the coefficient-matching equalities into the LMI (every
//! equation owns a Gram entry that appears nowhere else, so elimination is
//! exact and fill-free), and hands the result to the `sdp` solver.
//!
//! Degree-parity reductions shrink the Gram blocks: an even expression
//! splits into even/odd basis blocks, a homogeneous one needs only the
//! half-degree shell.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::poly::{Degree, Monomial, Polynomial};
use crate::sdp::{self, SdpBlock, SdpProblem, SdpStatus, SolveOptions, SparseSym};

/// Ordered monomial basis with all moduli at most `max_deg`.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub n: usize,
    pub max_deg: u32,
    pub elements: Vec<Monomial>,
}

impl MonomialBasis {
    /// All monomials of modulus <= max_deg, graded-lex ordered. The size is
    /// C(n + max_deg, n).
    pub fn ball(n: usize, max_deg: u32) -> Self {
        let mut elements = Vec::new();
        for d in 0..=max_deg {
            elements.extend(monomials_of_degree(n, d));
        }
        MonomialBasis {
            n,
            max_deg,
            elements,
        }
    }

    /// Only the even-modulus or odd-modulus monomials of the ball.
    pub fn parity_ball(n: usize, max_deg: u32, even: bool) -> Self {
        let mut elements = Vec::new();
        for d in 0..=max_deg {
            if (d % 2 == 0) == even {
                elements.extend(monomials_of_degree(n, d));
            }
        }
        MonomialBasis {
            n,
            max_deg,
            elements,
        }
    }

    /// Monomials of modulus exactly `deg`.
    pub fn shell(n: usize, deg: u32) -> Self {
        MonomialBasis {
            n,
            max_deg: deg,
            elements: monomials_of_degree(n, deg),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Monomials of exact total degree `d` in graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        let n = current.len();
        if pos == n - 1 {
            current[pos] = remaining;
            out.push(Monomial(current.clone()));
            current[pos] = 0;
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            fill(out, current, pos + 1, remaining - e);
        }
        current[pos] = 0;
    }
    if n == 0 {
        return if d == 0 {
            vec![Monomial(vec![])]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill(&mut out, &mut current, 0, d);
    out.sort();
    out
}

/// Handle to a scalar decision variable of a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(pub usize);

/// Polynomial expression affine in the decision variables:
/// `base + sum_v y_v * coeff_v`.
#[derive(Debug, Clone)]
pub struct PolyExpr {
    pub base: Polynomial,
    pub linear: Vec<(VarId, Polynomial)>,
}

impl PolyExpr {
    pub fn new(base: Polynomial) -> Self {
        PolyExpr {
            base,
            linear: Vec::new(),
        }
    }

    pub fn push(&mut self, var: VarId, coeff: Polynomial) {
        if !coeff.is_zero() {
            self.linear.push((var, coeff));
        }
    }

    fn n(&self) -> usize {
        self.base.n()
    }

    fn max_degree(&self) -> u32 {
        let mut d = self.base.degree().as_u32().unwrap_or(0);
        for (_, c) in &self.linear {
            d = d.max(c.degree().as_u32().unwrap_or(0));
        }
        d
    }

    /// Value of the expression at a concrete variable assignment.
    pub fn value(&self, assignment: &dyn Fn(VarId) -> f64) -> Polynomial {
        let mut acc = self.base.clone();
        for (v, c) in &self.linear {
            acc = acc.add(&c.scale(assignment(*v)));
        }
        acc
    }
}

#[derive(Debug, Clone)]
struct VarDecl {
    name: String,
    nonneg: bool,
}

/// A sum-of-squares optimization program (maximization convention).
#[derive(Debug, Clone)]
pub struct SosProgram {
    n: usize,
    vars: Vec<VarDecl>,
    objective: Vec<(VarId, f64)>,
    constraints: Vec<PolyExpr>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SosError {
    #[error("polynomial degree must be even, got {0}")]
    OddDegree(u32),
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("input must be homogeneous")]
    NotHomogeneous,
    #[error("sphere exponent p must be even and >= 2, got {0}")]
    BadSphereExponent(u32),
    #[error("constraint {0} mentions an undeclared variable")]
    UndeclaredVariable(usize),
    #[error("variable {0:?} appears in no constraint")]
    UnusedVariable(VarId),
    #[error("dimension mismatch between program (n={0}) and expression (n={1})")]
    DimensionMismatch(usize, usize),
}

impl SosProgram {
    pub fn new(n: usize) -> Self {
        SosProgram {
            n,
            vars: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn free_var(&mut self, name: &str) -> VarId {
        self.vars.push(VarDecl {
            name: name.to_string(),
            nonneg: false,
        });
        VarId(self.vars.len() - 1)
    }

    pub fn nonneg_var(&mut self, name: &str) -> VarId {
        self.vars.push(VarDecl {
            name: name.to_string(),
            nonneg: true,
        });
        VarId(self.vars.len() - 1)
    }

    /// A polynomial-valued free variable: one scalar per basis monomial.
    pub fn free_poly_var(&mut self, name: &str, basis: &MonomialBasis) -> Vec<VarId> {
        basis
            .elements
            .iter()
            .enumerate()
            .map(|(i, _)| self.free_var(&format!("{name}[{i}]")))
            .collect()
    }

    pub fn maximize(&mut self, terms: Vec<(VarId, f64)>) {
        self.objective = terms;
    }

    pub fn add_sos(&mut self, expr: PolyExpr) {
        self.constraints.push(expr);
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v.0].name
    }

    /// Compile to an LMI-form SDP. Gram entries are eliminated into the
    /// parameterization: the decision vector is the program variables
    /// followed by the free Gram entries, and each Gram block is an affine
    /// function of that vector satisfying the coefficient-matching
    /// identities exactly, for every argument.
    pub fn compile(&self) -> Result<CompiledSos, SosError> {
        for (ci, expr) in self.constraints.iter().enumerate() {
            if expr.n() != self.n {
                return Err(SosError::DimensionMismatch(self.n, expr.n()));
            }
            for (v, c) in &expr.linear {
                if v.0 >= self.vars.len() {
                    return Err(SosError::UndeclaredVariable(ci));
                }
                if c.n() != self.n {
                    return Err(SosError::DimensionMismatch(self.n, c.n()));
                }
            }
        }

        let num_prog = self.vars.len();
        let mut blocks_meta: Vec<BlockMeta> = Vec::new();
        let mut constraint_blocks: Vec<Vec<usize>> = Vec::new();
        let mut equations: Vec<Equation> = Vec::new();

        for (ci, expr) in self.constraints.iter().enumerate() {
            let layout = choose_layout(self.n, expr);
            let mut my_blocks = Vec::new();
            for basis in layout.bases {
                my_blocks.push(blocks_meta.len());
                blocks_meta.push(BlockMeta {
                    basis,
                    entry_base: 0,
                });
            }
            constraint_blocks.push(my_blocks.clone());

            // Group Gram pairs by the monomial they produce; one equation
            // per produced monomial.
            let mut pairs: BTreeMap<Monomial, Vec<(usize, usize, usize, f64)>> = BTreeMap::new();
            for &bidx in &my_blocks {
                let basis = &blocks_meta[bidx].basis;
                for i in 0..basis.len() {
                    for j in i..basis.len() {
                        let gamma = basis.elements[i].product_with(&basis.elements[j]);
                        let mult = if i == j { 1.0 } else { 2.0 };
                        pairs.entry(gamma).or_default().push((bidx, i, j, mult));
                    }
                }
            }
            for (gamma, plist) in pairs {
                let base_coeff = expr.base.coeff(&gamma);
                let mut lin: Vec<(usize, f64)> = Vec::new();
                for (v, c) in &expr.linear {
                    let coeff = c.coeff(&gamma);
                    if coeff != 0.0 {
                        lin.push((v.0, coeff));
                    }
                }
                lin.sort_by_key(|(v, _)| *v);
                lin.dedup_by(|a, b| {
                    if a.0 == b.0 {
                        b.1 += a.1;
                        true
                    } else {
                        false
                    }
                });
                equations.push(Equation {
                    pairs: plist,
                    base: base_coeff,
                    lin,
                });
            }
        }

        // Assign global entry indices block by block.
        let mut next_free = 0usize;
        for meta in blocks_meta.iter_mut() {
            meta.entry_base = next_free;
            let s = meta.basis.len();
            next_free += s * (s + 1) / 2;
        }
        let total_entries = next_free;
        let entry_index = |metas: &[BlockMeta], bidx: usize, i: usize, j: usize| -> usize {
            let s = metas[bidx].basis.len();
            debug_assert!(i <= j);
            metas[bidx].entry_base + i * (2 * s - i + 1) / 2 + (j - i)
        };

        // One pivot Gram entry per equation; every Gram entry belongs to
        // exactly one equation, so pivots never collide and the rest stay
        // free.
        let mut role = vec![Role::Free; total_entries];
        for (eq_idx, eq) in equations.iter().enumerate() {
            let (b, i, j, _) = eq.pairs[0];
            role[entry_index(&blocks_meta, b, i, j)] = Role::Pivot(eq_idx);
        }

        // Free entries get LMI indices after the program variables.
        let mut lmi_index = vec![usize::MAX; total_entries];
        let mut num_lmi = num_prog;
        for (g, r) in role.iter().enumerate() {
            if matches!(r, Role::Free) {
                lmi_index[g] = num_lmi;
                num_lmi += 1;
            }
        }

        let mut sdp_blocks: Vec<SdpBlock> = blocks_meta
            .iter()
            .map(|m| SdpBlock::new(m.basis.len().max(1)))
            .collect();
        let mut accum: Vec<BTreeMap<usize, SparseSym>> = vec![BTreeMap::new(); blocks_meta.len()];

        let locate = |g: usize| -> (usize, usize, usize) {
            let bidx = match blocks_meta.binary_search_by(|m| m.entry_base.cmp(&g)) {
                Ok(k) => k,
                Err(k) => k - 1,
            };
            let s = blocks_meta[bidx].basis.len();
            let (i, j) = tri_unindex(g - blocks_meta[bidx].entry_base, s);
            (bidx, i, j)
        };

        for (g, r) in role.iter().enumerate() {
            let (bidx, i, j) = locate(g);
            match r {
                Role::Free => {
                    accum[bidx].entry(lmi_index[g]).or_default().push(i, j, 1.0);
                }
                Role::Pivot(eq_idx) => {
                    let eq = &equations[*eq_idx];
                    let (pb, pi, pj, pmult) = eq.pairs[0];
                    debug_assert_eq!((pb, pi, pj), (bidx, i, j));
                    // pivot = (base + sum_v lin_v y_v - sum_other mult*entry) / pmult
                    sdp_blocks[bidx].f0[(i, j)] += eq.base / pmult;
                    if i != j {
                        sdp_blocks[bidx].f0[(j, i)] += eq.base / pmult;
                    }
                    for (v, coeff) in &eq.lin {
                        accum[bidx].entry(*v).or_default().push(i, j, coeff / pmult);
                    }
                    for &(ob, oi, oj, omult) in eq.pairs.iter().skip(1) {
                        let og = entry_index(&blocks_meta, ob, oi, oj);
                        debug_assert!(matches!(role[og], Role::Free));
                        accum[bidx]
                            .entry(lmi_index[og])
                            .or_default()
                            .push(i, j, -omult / pmult);
                    }
                }
            }
        }
        for (bidx, map) in accum.into_iter().enumerate() {
            for (var, sp) in map {
                sdp_blocks[bidx].terms.push((var, sp));
            }
        }

        // Scalar nonnegativity as 1x1 blocks.
        for (vi, decl) in self.vars.iter().enumerate() {
            if decl.nonneg {
                let mut blk = SdpBlock::new(1);
                let mut sp = SparseSym::new();
                sp.push(0, 0, 1.0);
                blk.terms.push((vi, sp));
                sdp_blocks.push(blk);
            }
        }

        let mut objective = vec![0.0; num_lmi];
        for (v, c) in &self.objective {
            objective[v.0] += c;
        }

        let sdp = SdpProblem {
            num_vars: num_lmi,
            objective,
            blocks: sdp_blocks,
        };
        sdp.validate().map_err(|e| match e {
            sdp::SdpProblemError::UnusedVariable { var } if var < num_prog => {
                SosError::UnusedVariable(VarId(var))
            }
            other => panic!("compiler produced an invalid SDP: {other}"),
        })?;

        Ok(CompiledSos {
            sdp,
            num_prog_vars: num_prog,
            constraint_blocks,
            block_bases: blocks_meta.into_iter().map(|m| m.basis).collect(),
            n: self.n,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Role {
    Free,
    Pivot(usize),
}

struct BlockMeta {
    basis: MonomialBasis,
    entry_base: usize,
}

struct Equation {
    /// Gram pairs `(block, i, j, multiplicity)` producing this monomial.
    pairs: Vec<(usize, usize, usize, f64)>,
    base: f64,
    lin: Vec<(usize, f64)>,
}

struct Layout {
    bases: Vec<MonomialBasis>,
}

/// Basis layout for one SOS constraint: homogeneous expressions use the
/// half-degree shell, even ones split into parity blocks, everything else
/// the full half-degree ball.
fn choose_layout(n: usize, expr: &PolyExpr) -> Layout {
    let raw_deg = expr.max_degree();
    let deg = raw_deg + raw_deg % 2;
    let half = deg / 2;

    let mut all_even = true;
    let mut all_exact = true;
    let mut inspect = |p: &Polynomial| {
        for (m, _) in p.terms() {
            if m.modulus() % 2 == 1 {
                all_even = false;
            }
            if m.modulus() != deg {
                all_exact = false;
            }
        }
    };
    inspect(&expr.base);
    for (_, c) in &expr.linear {
        inspect(c);
    }

    if all_exact && deg > 0 {
        Layout {
            bases: vec![MonomialBasis::shell(n, half)],
        }
    } else if all_even && half > 0 {
        Layout {
            bases: vec![
                MonomialBasis::parity_ball(n, half, true),
                MonomialBasis::parity_ball(n, half, false),
            ],
        }
    } else {
        Layout {
            bases: vec![MonomialBasis::ball(n, half)],
        }
    }
}

fn tri_unindex(local: usize, s: usize) -> (usize, usize) {
    let mut i = 0;
    let mut acc = 0;
    loop {
        let row_len = s - i;
        if local < acc + row_len {
            return (i, i + (local - acc));
        }
        acc += row_len;
        i += 1;
    }
}

/// Compiled program plus the mapping back from LMI variables.
pub struct CompiledSos {
    pub sdp: SdpProblem,
    num_prog_vars: usize,
    constraint_blocks: Vec<Vec<usize>>,
    block_bases: Vec<MonomialBasis>,
    n: usize,
}

impl CompiledSos {
    pub fn var_value(&self, sol: &sdp::SdpSolution, v: VarId) -> f64 {
        debug_assert!(v.0 < self.num_prog_vars);
        sol.y[v.0]
    }

    /// Gram certificate blocks (basis, matrix) of one constraint.
    pub fn gram_blocks(&self, sol: &sdp::SdpSolution, constraint: usize) -> Vec<GramBlock> {
        self.constraint_blocks[constraint]
            .iter()
            .map(|&bidx| GramBlock {
                basis: self.block_bases[bidx].elements.clone(),
                matrix: sol.block_witnesses[bidx].clone(),
            })
            .collect()
    }

    /// Rebuild the constraint polynomial from its Gram representation.
    pub fn reconstruct(&self, sol: &sdp::SdpSolution, constraint: usize) -> Polynomial {
        reconstruct_from_grams(self.n, &self.gram_blocks(sol, constraint))
    }
}

/// One PSD certificate block: `sum_{i,j} Q[i,j] X^(basis_i + basis_j)`.
#[derive(Debug, Clone)]
pub struct GramBlock {
    pub basis: Vec<Monomial>,
    pub matrix: DMatrix<f64>,
}

pub fn reconstruct_from_grams(n: usize, grams: &[GramBlock]) -> Polynomial {
    let mut acc = Polynomial::zero(n);
    for g in grams {
        let s = g.basis.len();
        let mut terms = Vec::new();
        for i in 0..s {
            for j in i..s {
                let mult = if i == j { 1.0 } else { 2.0 };
                terms.push((
                    g.basis[i].product_with(&g.basis[j]),
                    mult * g.matrix[(i, j)],
                ));
            }
        }
        acc = acc.add(&Polynomial::from_terms(n, terms));
    }
    acc
}

/// Outcome of one SOS bound computation: the optimal value, the solver
/// status, and the certificate realizing the constraints.
#[derive(Debug, Clone)]
pub struct SosBound {
    pub value: f64,
    pub status: SdpStatus,
    pub duality_gap: f64,
    pub grams: Vec<GramBlock>,
    /// Named multiplier polynomials recovered from the solution (the free
    /// multiplier `q` of the sphere program, for instance).
    pub multipliers: Vec<(String, Polynomial)>,
}

impl SosBound {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SosOptions {
    pub sdp: SolveOptions,
}

/// `max y1 s.t. f - y1 in SOS`: the plain unconstrained lower bound.
pub fn unconstrained_lower_bound(f: &Polynomial, opts: &SosOptions) -> Result<SosBound, SosError> {
    let deg = match f.degree() {
        Degree::NegInfinity => 0,
        Degree::Of(d) => d,
    };
    if deg % 2 == 1 {
        return Err(SosError::OddDegree(deg));
    }
    let mut prog = SosProgram::new(f.n());
    let y1 = prog.free_var("y1");
    prog.maximize(vec![(y1, 1.0)]);
    let mut expr = PolyExpr::new(f.clone());
    expr.push(y1, Polynomial::constant(f.n(), -1.0));
    prog.add_sos(expr);

    let compiled = prog.compile()?;
    let sol = sdp::solve(&compiled.sdp, &opts.sdp);
    Ok(SosBound {
        value: compiled.var_value(&sol, y1),
        status: sol.status,
        duality_gap: sol.duality_gap,
        grams: compiled.gram_blocks(&sol, 0),
        multipliers: vec![],
    })
}

/// Lower bound on a homogeneous `fj` over the p-sphere:
/// `max y1 s.t. fj - y1 - q (1 - sum X_i^p) in SOS, deg q <= k` with a free
/// polynomial multiplier `q`.
pub fn sphere_min_bound(
    fj: &Polynomial,
    p: u32,
    k: u32,
    opts: &SosOptions,
) -> Result<SosBound, SosError> {
    let j = homogeneous_degree(fj)?;
    if p % 2 == 1 || p == 0 {
        return Err(SosError::BadSphereExponent(p));
    }
    let n = fj.n();

    // For even fj the whole program is invariant under x -> -x, so q may be
    // restricted to even monomials without loss.
    let q_basis = if j % 2 == 0 {
        MonomialBasis::parity_ball(n, k, true)
    } else {
        MonomialBasis::ball(n, k)
    };

    let mut prog = SosProgram::new(n);
    let y1 = prog.free_var("y1");
    let q_vars = prog.free_poly_var("q", &q_basis);
    prog.maximize(vec![(y1, 1.0)]);

    // fj - y1 - q + q * sum X_i^p
    let mut expr = PolyExpr::new(fj.clone());
    expr.push(y1, Polynomial::constant(n, -1.0));
    let sphere = sum_of_powers(n, p);
    for (vid, beta) in q_vars.iter().zip(&q_basis.elements) {
        let x_beta = Polynomial::from_terms(n, [(beta.clone(), 1.0)]);
        let coeff = x_beta.mul(&sphere).sub(&x_beta);
        expr.push(*vid, coeff);
    }
    prog.add_sos(expr);

    let compiled = prog.compile()?;
    let sol = sdp::solve(&compiled.sdp, &opts.sdp);
    let q_poly = Polynomial::from_terms(
        n,
        q_basis
            .elements
            .iter()
            .zip(&q_vars)
            .map(|(m, v)| (m.clone(), compiled.var_value(&sol, *v))),
    );
    Ok(SosBound {
        value: compiled.var_value(&sol, y1),
        status: sol.status,
        duality_gap: sol.duality_gap,
        grams: compiled.gram_blocks(&sol, 0),
        multipliers: vec![("q".to_string(), q_poly)],
    })
}

/// Nie's leading-form bound: `max gamma s.t. f_d - gamma * sum X_i^d in SOS`.
/// A positive value certifies that `f_d` is positive definite.
pub fn nie_bound(fd: &Polynomial, opts: &SosOptions) -> Result<SosBound, SosError> {
    let d = homogeneous_degree(fd)?;
    if d % 2 == 1 {
        return Err(SosError::OddDegree(d));
    }
    let n = fd.n();
    let mut prog = SosProgram::new(n);
    let gamma = prog.free_var("gamma");
    prog.maximize(vec![(gamma, 1.0)]);
    let mut expr = PolyExpr::new(fd.clone());
    expr.push(gamma, sum_of_powers(n, d).scale(-1.0));
    prog.add_sos(expr);

    let compiled = prog.compile()?;
    let sol = sdp::solve(&compiled.sdp, &opts.sdp);
    Ok(SosBound {
        value: compiled.var_value(&sol, gamma),
        status: sol.status,
        duality_gap: sol.duality_gap,
        grams: compiled.gram_blocks(&sol, 0),
        multipliers: vec![],
    })
}

/// Sphere bounds along an increasing list of relaxation levels; values are
/// nondecreasing in k up to solver tolerance.
pub fn convergence_sweep(
    fj: &Polynomial,
    p: u32,
    k_list: &[u32],
    opts: &SosOptions,
) -> Result<Vec<SosBound>, SosError> {
    k_list
        .iter()
        .map(|&k| sphere_min_bound(fj, p, k, opts))
        .collect()
}

/// `sum_i X_i^p`.
pub fn sum_of_powers(n: usize, p: u32) -> Polynomial {
    Polynomial::from_terms(
        n,
        (0..n).map(|i| {
            let mut exps = vec![0u32; n];
            exps[i] = p;
            (Monomial(exps), 1.0)
        }),
    )
}

fn homogeneous_degree(f: &Polynomial) -> Result<u32, SosError> {
    let d = f.degree().as_u32().ok_or(SosError::ZeroPolynomial)?;
    for (m, _) in f.terms() {
        if m.modulus() != d {
            return Err(SosError::NotHomogeneous);
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::lmi_slacks;

    fn poly(text: &str, n: usize) -> Polynomial {
        Polynomial::parse(text, n).unwrap()
    }

    #[test]
    fn basis_sizes_match_binomials() {
        let b = MonomialBasis::ball(2, 3);
        assert_eq!(b.len(), 10); // C(5,2)
        let b = MonomialBasis::ball(3, 4);
        assert_eq!(b.len(), 35); // C(7,3)
        let shell = MonomialBasis::shell(3, 2);
        assert_eq!(shell.len(), 6);
        let mut sorted = b.elements.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, b.elements);
    }

    #[test]
    fn compile_simple_bounds() {
        // max y1 s.t. X^2 - y1 in SOS  ->  0
        let b = unconstrained_lower_bound(&poly("x1^2", 1), &SosOptions::default()).unwrap();
        assert!(b.is_optimal());
        assert!(b.value.abs() < 1e-6, "value = {}", b.value);

        // (X-1)^2 + 3  ->  3
        let b = unconstrained_lower_bound(&poly("x1^2 - 2*x1 + 4", 1), &SosOptions::default())
            .unwrap();
        assert!((b.value - 3.0).abs() < 1e-6);

        // X^4 - 2X^2 + 1 = (X^2-1)^2  ->  0
        let b = unconstrained_lower_bound(&poly("x1^4 - 2*x1^2 + 1", 1), &SosOptions::default())
            .unwrap();
        assert!(b.value.abs() < 1e-6, "value = {}", b.value);

        // max y1 s.t. X^2 + 2X + 2 - y1 in SOS -> 1 (complete the square)
        let b = unconstrained_lower_bound(&poly("x1^2 + 2*x1 + 2", 1), &SosOptions::default())
            .unwrap();
        assert!((b.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unconstrained_examples() {
        let b = unconstrained_lower_bound(&poly("x1^2 + x2^2 + 1", 2), &SosOptions::default())
            .unwrap();
        assert!((b.value - 1.0).abs() < 1e-6);

        let b = unconstrained_lower_bound(&poly("x1^2 - x1 + 0.25", 1), &SosOptions::default())
            .unwrap();
        assert!(b.value.abs() < 1e-6);
    }

    #[test]
    fn unconstrained_rejects_odd_degree() {
        assert_eq!(
            unconstrained_lower_bound(&poly("x1^3", 1), &SosOptions::default()).unwrap_err(),
            SosError::OddDegree(3)
        );
    }

    #[test]
    fn motzkin_has_no_sos_lower_bound() {
        // x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1 is nonnegative but M - y1 is
        // never SOS, so the program is infeasible.
        let m = poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
        let b = unconstrained_lower_bound(&m, &SosOptions::default()).unwrap();
        assert_eq!(b.status, SdpStatus::Infeasible);
    }

    #[test]
    fn gram_identity_holds_for_arbitrary_arguments() {
        // The elimination guarantees the polynomial identity for any LMI
        // point, not just the optimum.
        let f = poly("x1^4 + 2*x1^3 - x1 + 5", 1);
        let mut prog = SosProgram::new(1);
        let y1 = prog.free_var("y1");
        prog.maximize(vec![(y1, 1.0)]);
        let mut expr = PolyExpr::new(f.clone());
        expr.push(y1, Polynomial::constant(1, -1.0));
        prog.add_sos(expr.clone());
        let compiled = prog.compile().unwrap();

        let mut rng = crate::rng::Rng::new(99);
        for _ in 0..5 {
            let y: Vec<f64> = (0..compiled.sdp.num_vars)
                .map(|_| rng.uniform_sym())
                .collect();
            let slacks = lmi_slacks(&compiled.sdp, &y);
            let grams: Vec<GramBlock> = compiled.constraint_blocks[0]
                .iter()
                .map(|&b| GramBlock {
                    basis: compiled.block_bases[b].elements.clone(),
                    matrix: slacks[b].clone(),
                })
                .collect();
            let rebuilt = reconstruct_from_grams(1, &grams);
            let target = expr.value(&|v| y[v.0]);
            let diff = rebuilt.sub(&target);
            assert!(
                diff.one_norm() < 1e-9,
                "identity residual {}",
                diff.one_norm()
            );
        }
    }

    #[test]
    fn sphere_bound_constant_form() {
        // x1^2 + x2^2 is identically 1 on the 2-sphere.
        let b = sphere_min_bound(&poly("x1^2 + x2^2", 2), 2, 2, &SosOptions::default()).unwrap();
        assert!(b.is_optimal());
        assert!((b.value - 1.0).abs() < 1e-6, "value = {}", b.value);
    }

    #[test]
    fn sphere_bound_variety_quadratic() {
        // f_2 of the variety example; its minimum on the unit 2-sphere is -2.
        let f2 = poly("-x1^2 - x2^2 - x3^2 - 2*x1*x3", 3);
        let b = sphere_min_bound(&f2, 2, 4, &SosOptions::default()).unwrap();
        assert!(b.is_optimal());
        assert!((b.value + 2.0).abs() < 0.05, "value = {}", b.value);
    }

    #[test]
    fn sphere_bound_rejects_bad_input() {
        assert_eq!(
            sphere_min_bound(&poly("x1^2 + x1", 1), 2, 2, &SosOptions::default()).unwrap_err(),
            SosError::NotHomogeneous
        );
        assert_eq!(
            sphere_min_bound(&poly("x1^2", 1), 3, 2, &SosOptions::default()).unwrap_err(),
            SosError::BadSphereExponent(3)
        );
    }

    #[test]
    fn nie_bound_examples() {
        // sum x_i^d itself: gamma = 1.
        let b = nie_bound(&poly("x1^4 + x2^4", 2), &SosOptions::default()).unwrap();
        assert!((b.value - 1.0).abs() < 1e-6, "value = {}", b.value);

        // x1^4 + x2^4 + x1^2 x2^2: at least 1 since the extra term is a square.
        let b = nie_bound(&poly("x1^4 + x2^4 + x1^2*x2^2", 2), &SosOptions::default()).unwrap();
        assert!(b.value >= 1.0 - 1e-6, "value = {}", b.value);

        // Indefinite quadratic form: eigenvalues of [[1,2],[2,1]] are 3, -1.
        let b = nie_bound(&poly("x1^2 + 4*x1*x2 + x2^2", 2), &SosOptions::default()).unwrap();
        assert!((b.value + 1.0).abs() < 1e-6, "value = {}", b.value);
    }

    #[test]
    fn sweep_is_monotone_and_exact_for_constant_form() {
        let f = poly("x1^2 + x2^2", 2);
        let sweep = convergence_sweep(&f, 2, &[2, 4, 6], &SosOptions::default()).unwrap();
        for b in &sweep {
            assert!(b.is_optimal());
            assert!((b.value - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn certificate_reconstruction_matches_at_optimum() {
        let f = poly("x1^4 - 2*x1^2 + 1", 1);
        let opts = SosOptions::default();
        let b = unconstrained_lower_bound(&f, &opts).unwrap();
        assert!(b.is_optimal());
        let rebuilt = reconstruct_from_grams(1, &b.grams);
        let target = f.sub(&Polynomial::constant(1, b.value));
        assert!(rebuilt.sub(&target).one_norm() < 1e-6);
    }
}
