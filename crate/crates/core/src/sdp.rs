//! Dense primal-dual interior-point solver for small block-structured
//! semidefinite programs in linear-matrix-inequality form:
//!
//! ```text
//! max  b' y   s.t.   F0_k + y_1 F1_k + ... + y_m Fm_k  >= 0   (each block k)
//! ```
//!
//! 1x1 blocks encode scalar nonnegativity. Internally the solver works on
//! the standard primal/dual pair with `C = F0`, `A_i = -F_i`, running an
//! infeasible-start HKM predictor-corrector with dense block algebra. The
//! Gram matrices of the SOS programs in this crate are at most a few
//! hundred rows, so dense factorizations are entirely adequate.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Symmetric matrix stored as upper-triangle entries `(r, c, v)` with `r <= c`.
#[derive(Debug, Clone, Default)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn new() -> Self {
        SparseSym::default()
    }

    pub fn push(&mut self, r: usize, c: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        if r <= c {
            self.entries.push((r, c, v));
        } else {
            self.entries.push((c, r, v));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// tr(A * B) for this symmetric A and an arbitrary square B.
    fn dot(&self, b: &DMatrix<f64>) -> f64 {
        let mut acc = 0.0;
        for &(r, c, v) in &self.entries {
            if r == c {
                acc += v * b[(r, r)];
            } else {
                acc += v * (b[(r, c)] + b[(c, r)]);
            }
        }
        acc
    }

    fn add_into(&self, target: &mut DMatrix<f64>, scale: f64) {
        for &(r, c, v) in &self.entries {
            target[(r, c)] += scale * v;
            if r != c {
                target[(c, r)] += scale * v;
            }
        }
    }

    fn frob_norm(&self) -> f64 {
        let mut acc = 0.0;
        for &(r, c, v) in &self.entries {
            acc += if r == c { v * v } else { 2.0 * v * v };
        }
        acc.sqrt()
    }
}

/// One PSD block of the LMI together with the coefficient matrices of the
/// decision variables that touch it.
#[derive(Debug, Clone)]
pub struct SdpBlock {
    pub size: usize,
    pub f0: DMatrix<f64>,
    /// `(variable index, coefficient matrix)`; variables absent from the
    /// block are not listed.
    pub terms: Vec<(usize, SparseSym)>,
}

impl SdpBlock {
    pub fn new(size: usize) -> Self {
        SdpBlock {
            size,
            f0: DMatrix::zeros(size, size),
            terms: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub num_vars: usize,
    /// Objective vector `b`; the solver maximizes `b' y`.
    pub objective: Vec<f64>,
    pub blocks: Vec<SdpBlock>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SdpProblemError {
    #[error("objective length {got} does not match num_vars {want}")]
    ObjectiveLength { got: usize, want: usize },
    #[error("problem must have at least one block")]
    NoBlocks,
    #[error("block {block}: entry index out of range")]
    EntryOutOfRange { block: usize },
    #[error("block {block}: constant matrix is not symmetric")]
    NotSymmetric { block: usize },
    #[error("block {block}: variable index {var} out of range")]
    VarOutOfRange { block: usize, var: usize },
    #[error("variable {var} appears in no block")]
    UnusedVariable { var: usize },
}

impl SdpProblem {
    pub fn validate(&self) -> Result<(), SdpProblemError> {
        if self.objective.len() != self.num_vars {
            return Err(SdpProblemError::ObjectiveLength {
                got: self.objective.len(),
                want: self.num_vars,
            });
        }
        if self.blocks.is_empty() {
            return Err(SdpProblemError::NoBlocks);
        }
        let mut used = vec![false; self.num_vars];
        for (bi, blk) in self.blocks.iter().enumerate() {
            if blk.f0.nrows() != blk.size || blk.f0.ncols() != blk.size {
                return Err(SdpProblemError::NotSymmetric { block: bi });
            }
            let asym = (&blk.f0 - blk.f0.transpose()).abs().max();
            if asym > 1e-12 * (1.0 + blk.f0.abs().max()) {
                return Err(SdpProblemError::NotSymmetric { block: bi });
            }
            for (var, sp) in &blk.terms {
                if *var >= self.num_vars {
                    return Err(SdpProblemError::VarOutOfRange {
                        block: bi,
                        var: *var,
                    });
                }
                if !sp.is_empty() {
                    used[*var] = true;
                }
                for &(r, c, _) in &sp.entries {
                    if r > c || c >= blk.size {
                        return Err(SdpProblemError::EntryOutOfRange { block: bi });
                    }
                }
            }
        }
        if let Some(var) = used.iter().position(|u| !u) {
            return Err(SdpProblemError::UnusedVariable { var });
        }
        Ok(())
    }

    /// Sparse SDPA text dump for cross-checking against external solvers.
    ///
    /// The mapping to SDPA's `min c'x s.t. sum x_i F_i - F_0 >= 0` is
    /// `c = -b`, `F_i` as stored and `F_0` negated; the SDPA optimum `x*`
    /// equals `y*` and its objective is the negated LMI value.
    pub fn write_sdpa(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.num_vars);
        let _ = writeln!(out, "{}", self.blocks.len());
        let sizes: Vec<String> = self.blocks.iter().map(|b| b.size.to_string()).collect();
        let _ = writeln!(out, "{}", sizes.join(" "));
        let cs: Vec<String> = self.objective.iter().map(|c| format!("{}", -c)).collect();
        let _ = writeln!(out, "{}", cs.join(" "));
        for (bi, blk) in self.blocks.iter().enumerate() {
            for r in 0..blk.size {
                for c in r..blk.size {
                    let v = blk.f0[(r, c)];
                    if v != 0.0 {
                        let _ = writeln!(out, "0 {} {} {} {}", bi + 1, r + 1, c + 1, -v);
                    }
                }
            }
            for (var, sp) in &blk.terms {
                for &(r, c, v) in &sp.entries {
                    let _ = writeln!(out, "{} {} {} {} {}", var + 1, bi + 1, r + 1, c + 1, v);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub y: Vec<f64>,
    /// Value of `b' y` at the returned point.
    pub objective_value: f64,
    /// The LMI slack `F0 + sum y_i F_i` per block; PSD up to `feas_tol`
    /// when the status is `Optimal`.
    pub block_witnesses: Vec<DMatrix<f64>>,
    /// Relative gap between the two sides at the returned point.
    pub duality_gap: f64,
    /// Objective of the internal minimization side, for duality checks.
    pub primal_objective: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iters: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iters: 200,
        }
    }
}

/// Solve the LMI-form problem. Panics if the problem fails validation;
/// numerical trouble is reported through the status, never by panic.
pub fn solve(problem: &SdpProblem, opts: &SolveOptions) -> SdpSolution {
    if let Err(e) = problem.validate() {
        panic!("invalid SDP problem: {e}");
    }
    Solver::new(problem, opts).run()
}

/// The LMI slack `F0 + sum y_i F_i` of every block at the given point.
pub fn lmi_slacks(problem: &SdpProblem, y: &[f64]) -> Vec<DMatrix<f64>> {
    problem
        .blocks
        .iter()
        .map(|blk| {
            let mut s = blk.f0.clone();
            for (var, sp) in &blk.terms {
                sp.add_into(&mut s, y[*var]);
            }
            s
        })
        .collect()
}

struct Solver<'a> {
    prob: &'a SdpProblem,
    opts: SolveOptions,
    m: usize,
    total_dim: usize,
    c_norm: f64,
    b_norm: f64,
    x: Vec<DMatrix<f64>>,
    s: Vec<DMatrix<f64>>,
    y: DVector<f64>,
}

struct Residuals {
    rp: DVector<f64>,
    rd: Vec<DMatrix<f64>>,
    rel_p: f64,
    rel_d: f64,
    pobj: f64,
    dobj: f64,
    rel_gap: f64,
    mu: f64,
}

impl<'a> Solver<'a> {
    fn new(prob: &'a SdpProblem, opts: &SolveOptions) -> Self {
        let m = prob.num_vars;
        let total_dim: usize = prob.blocks.iter().map(|b| b.size).sum();
        let c_norm = prob
            .blocks
            .iter()
            .map(|b| b.f0.norm().powi(2))
            .sum::<f64>()
            .sqrt();
        let b_norm = prob.objective.iter().map(|v| v * v).sum::<f64>().sqrt();

        // Starting scales in the spirit of CSDP's defaults.
        let mut a_norm_max: f64 = 1.0;
        for blk in &prob.blocks {
            for (_, sp) in &blk.terms {
                a_norm_max = a_norm_max.max(sp.frob_norm());
            }
        }
        let xi = 10.0_f64
            .max((total_dim as f64).sqrt())
            .max((1.0 + b_norm) / (1.0 + a_norm_max) * total_dim as f64);
        let eta = 10.0_f64
            .max((total_dim as f64).sqrt())
            .max(c_norm)
            .max(a_norm_max);

        let x = prob
            .blocks
            .iter()
            .map(|b| DMatrix::identity(b.size, b.size) * xi)
            .collect();
        let s = prob
            .blocks
            .iter()
            .map(|b| DMatrix::identity(b.size, b.size) * eta)
            .collect();
        Solver {
            prob,
            opts: *opts,
            m,
            total_dim,
            c_norm,
            b_norm,
            x,
            s,
            y: DVector::zeros(m),
        }
    }

    /// `A(B)` over all constraints for per-block dense matrices `B`;
    /// `A_i = -F_i`, the sign is applied here.
    fn apply_a(&self, bs: &[DMatrix<f64>]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        for (bi, blk) in self.prob.blocks.iter().enumerate() {
            for (var, sp) in &blk.terms {
                out[*var] -= sp.dot(&bs[bi]);
            }
        }
        out
    }

    /// `A*(v)` per block: dense symmetric accumulation of `-F_i v_i`.
    fn apply_a_star(&self, v: &DVector<f64>) -> Vec<DMatrix<f64>> {
        self.prob
            .blocks
            .iter()
            .map(|blk| {
                let mut acc = DMatrix::zeros(blk.size, blk.size);
                for (var, sp) in &blk.terms {
                    sp.add_into(&mut acc, -v[*var]);
                }
                acc
            })
            .collect()
    }

    fn residuals(&self) -> Residuals {
        let ax = self.apply_a(&self.x);
        let b = DVector::from_column_slice(&self.prob.objective);
        let rp = &b - &ax;
        let astar = self.apply_a_star(&self.y);
        let rd: Vec<DMatrix<f64>> = self
            .prob
            .blocks
            .iter()
            .enumerate()
            .map(|(k, blk)| &blk.f0 - &self.s[k] - &astar[k])
            .collect();
        let pobj: f64 = self
            .prob
            .blocks
            .iter()
            .enumerate()
            .map(|(k, blk)| blk.f0.component_mul(&self.x[k]).sum())
            .sum();
        let dobj = b.dot(&self.y);
        let mu: f64 = self
            .x
            .iter()
            .zip(&self.s)
            .map(|(x, s)| x.component_mul(s).sum())
            .sum::<f64>()
            / self.total_dim as f64;
        let rel_p = rp.norm() / (1.0 + self.b_norm);
        let rel_d =
            rd.iter().map(|r| r.norm().powi(2)).sum::<f64>().sqrt() / (1.0 + self.c_norm);
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        Residuals {
            rp,
            rd,
            rel_p,
            rel_d,
            pobj,
            dobj,
            rel_gap,
            mu,
        }
    }

    fn solution(&self, status: SdpStatus, res: &Residuals, iterations: usize) -> SdpSolution {
        let y: Vec<f64> = self.y.iter().copied().collect();
        SdpSolution {
            status,
            objective_value: res.dobj,
            block_witnesses: lmi_slacks(self.prob, &y),
            duality_gap: res.rel_gap,
            primal_objective: res.pobj,
            iterations,
            y,
        }
    }

    fn run(mut self) -> SdpSolution {
        if self.m == 0 {
            let res = self.residuals();
            let ok = self
                .prob
                .blocks
                .iter()
                .all(|blk| min_eig(&blk.f0) >= -self.opts.feas_tol);
            let status = if ok {
                SdpStatus::Optimal
            } else {
                SdpStatus::Infeasible
            };
            return self.solution(status, &res, 0);
        }

        let scale = 1.0 + self.c_norm + self.b_norm;
        let mut tiny_steps = 0usize;
        for iter in 0..self.opts.max_iters {
            let res = self.residuals();

            if res.rel_p <= self.opts.feas_tol
                && res.rel_d <= self.opts.feas_tol
                && res.rel_gap <= self.opts.gap_tol
            {
                // Declare optimality only with a genuinely PSD witness.
                let y: Vec<f64> = self.y.iter().copied().collect();
                let witness_ok = lmi_slacks(self.prob, &y)
                    .iter()
                    .all(|w| min_eig(w) >= -self.opts.feas_tol);
                if witness_ok {
                    return self.solution(SdpStatus::Optimal, &res, iter);
                }
            }

            // Divergence heuristics: an unbounded internal primal certifies
            // LMI infeasibility, an unbounded dual certifies unboundedness.
            if res.pobj < -1e9 * scale && res.rel_p <= 1e-6 {
                return self.solution(SdpStatus::Infeasible, &res, iter);
            }
            if res.dobj > 1e9 * scale && res.rel_d <= 1e-6 {
                return self.solution(SdpStatus::Unbounded, &res, iter);
            }
            if self.x.iter().map(|x| x.trace()).sum::<f64>() > 1e14 * scale {
                return self.solution(SdpStatus::Infeasible, &res, iter);
            }
            if self.y.amax() > 1e14 * scale {
                return self.solution(SdpStatus::Unbounded, &res, iter);
            }

            let step = match self.newton_step(&res) {
                Some(s) => s,
                None => return self.solution(SdpStatus::NumericalFailure, &res, iter),
            };
            let (alpha_p, alpha_d, dy, dx, ds) = step;

            if alpha_p < 1e-8 && alpha_d < 1e-8 {
                tiny_steps += 1;
                if tiny_steps >= 3 {
                    return self.solution(SdpStatus::NumericalFailure, &res, iter);
                }
            } else {
                tiny_steps = 0;
            }

            self.y += &dy * alpha_d;
            for k in 0..self.x.len() {
                self.x[k] += &dx[k] * alpha_p;
                self.s[k] += &ds[k] * alpha_d;
            }
        }
        let res = self.residuals();
        self.solution(SdpStatus::IterationLimit, &res, self.opts.max_iters)
    }

    /// One Mehrotra predictor-corrector round. Returns step lengths and
    /// directions, or `None` on factorization breakdown.
    #[allow(clippy::type_complexity)]
    fn newton_step(
        &self,
        res: &Residuals,
    ) -> Option<(f64, f64, DVector<f64>, Vec<DMatrix<f64>>, Vec<DMatrix<f64>>)> {
        let nblocks = self.prob.blocks.len();

        let mut chol_x = Vec::with_capacity(nblocks);
        let mut chol_s = Vec::with_capacity(nblocks);
        let mut s_inv = Vec::with_capacity(nblocks);
        for k in 0..nblocks {
            let cx = cholesky_with_jitter(&self.x[k])?;
            let cs = cholesky_with_jitter(&self.s[k])?;
            s_inv.push(cs.inverse());
            chol_x.push(cx);
            chol_s.push(cs);
        }

        // Schur complement M_ij = sum_k tr(A_ik X_k A_jk Sinv_k); the
        // A_i = -F_i signs cancel pairwise.
        let mut m_mat = DMatrix::zeros(self.m, self.m);
        for (bi, blk) in self.prob.blocks.iter().enumerate() {
            let x = &self.x[bi];
            let sinv = &s_inv[bi];
            for (ti, (vi, sp_i)) in blk.terms.iter().enumerate() {
                let t = sandwich(sinv, sp_i, x);
                for (vj, sp_j) in blk.terms.iter().skip(ti) {
                    let val = sp_j.dot(&t);
                    m_mat[(*vi, *vj)] += val;
                    if vi != vj {
                        m_mat[(*vj, *vi)] += val;
                    }
                }
            }
        }
        let chol_m = cholesky_with_ridge(&m_mat)?;

        // Common pieces: A(X Rd Sinv) and A(X).
        let x_rd_sinv: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|k| &self.x[k] * &res.rd[k] * &s_inv[k])
            .collect();
        let a_xrdsinv = self.apply_a(&x_rd_sinv);
        let a_x = self.apply_a(&self.x);

        // Predictor with Rc = -X S, so A(Rc Sinv) = -A(X).
        let rhs_aff = &res.rp + &a_x + &a_xrdsinv;
        let dy_aff = chol_m.solve(&rhs_aff);
        let (dx_aff, ds_aff) = self.directions(res, &dy_aff, &s_inv, None, 0.0);
        let ap_aff = max_step(&self.x, &dx_aff, &chol_x).min(1.0);
        let ad_aff = max_step(&self.s, &ds_aff, &chol_s).min(1.0);

        let mu_aff: f64 = (0..nblocks)
            .map(|k| {
                let xa = &self.x[k] + &dx_aff[k] * ap_aff;
                let sa = &self.s[k] + &ds_aff[k] * ad_aff;
                xa.component_mul(&sa).sum()
            })
            .sum::<f64>()
            / self.total_dim as f64;
        let sigma = (mu_aff / res.mu).powi(3).clamp(1e-10, 1.0);

        // Corrector with Rc = sigma*mu*I - X S - dXa dSa.
        let a_sinv = self.apply_a(&s_inv);
        let cross_sinv: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|k| &dx_aff[k] * &ds_aff[k] * &s_inv[k])
            .collect();
        let a_cross = self.apply_a(&cross_sinv);
        let rhs = &res.rp + &a_x + &a_xrdsinv - &a_sinv * (sigma * res.mu) + &a_cross;
        let dy = chol_m.solve(&rhs);
        let (dx, ds) = self.directions(res, &dy, &s_inv, Some(&cross_sinv), sigma * res.mu);

        let tau = 0.98;
        let alpha_p = (tau * max_step(&self.x, &dx, &chol_x)).min(1.0);
        let alpha_d = (tau * max_step(&self.s, &ds, &chol_s)).min(1.0);
        Some((alpha_p, alpha_d, dy, dx, ds))
    }

    /// Recover (dX, dS) from dy:
    ///   dS = Rd - A*(dy)
    ///   dX = Rc Sinv - X dS Sinv, symmetrized,
    /// where Rc = -X S + sigma*mu I - dXa dSa (the affine cross term
    /// arrives already multiplied by Sinv).
    fn directions(
        &self,
        res: &Residuals,
        dy: &DVector<f64>,
        s_inv: &[DMatrix<f64>],
        cross_sinv: Option<&[DMatrix<f64>]>,
        sigma_mu: f64,
    ) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
        let astar_dy = self.apply_a_star(dy);
        let nblocks = self.prob.blocks.len();
        let mut dx = Vec::with_capacity(nblocks);
        let mut ds = Vec::with_capacity(nblocks);
        for k in 0..nblocks {
            let ds_k = &res.rd[k] - &astar_dy[k];
            // Rc Sinv = -X + sigma*mu*Sinv - dXa dSa Sinv.
            let mut rc_sinv = -self.x[k].clone();
            if sigma_mu != 0.0 {
                rc_sinv += &s_inv[k] * sigma_mu;
            }
            if let Some(cross) = cross_sinv {
                rc_sinv -= &cross[k];
            }
            let dx_raw = rc_sinv - &self.x[k] * &ds_k * &s_inv[k];
            dx.push((&dx_raw + dx_raw.transpose()) * 0.5);
            ds.push(ds_k);
        }
        (dx, ds)
    }
}

/// T = P * A * X for symmetric sparse A, exploiting that A has few nonzero
/// rows.
fn sandwich(p: &DMatrix<f64>, a: &SparseSym, x: &DMatrix<f64>) -> DMatrix<f64> {
    let s = p.nrows();
    let mut t = DMatrix::zeros(s, s);
    use std::collections::BTreeMap;
    let mut rows: BTreeMap<usize, nalgebra::RowDVector<f64>> = BTreeMap::new();
    for &(r, c, v) in &a.entries {
        *rows
            .entry(r)
            .or_insert_with(|| nalgebra::RowDVector::zeros(s)) += x.row(c) * v;
        if r != c {
            *rows
                .entry(c)
                .or_insert_with(|| nalgebra::RowDVector::zeros(s)) += x.row(r) * v;
        }
    }
    for (r, row) in rows {
        let col = p.column(r).clone_owned();
        t.ger(1.0, &col, &row.transpose(), 1.0);
    }
    t
}

fn cholesky_with_jitter(mat: &DMatrix<f64>) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    if let Some(c) = nalgebra::Cholesky::new(mat.clone()) {
        return Some(c);
    }
    let scale = mat.diagonal().amax().max(1.0);
    let mut jitter = 1e-14 * scale;
    for _ in 0..5 {
        let adjusted = mat + DMatrix::identity(mat.nrows(), mat.ncols()) * jitter;
        if let Some(c) = nalgebra::Cholesky::new(adjusted) {
            return Some(c);
        }
        jitter *= 100.0;
    }
    None
}

fn cholesky_with_ridge(mat: &DMatrix<f64>) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    let scale = mat.diagonal().amax().max(1.0);
    let mut ridge = 0.0;
    for attempt in 0..8 {
        let candidate = if ridge == 0.0 {
            mat.clone()
        } else {
            mat + DMatrix::identity(mat.nrows(), mat.ncols()) * ridge
        };
        if let Some(c) = nalgebra::Cholesky::new(candidate) {
            return Some(c);
        }
        ridge = 1e-14 * scale * 10f64.powi(attempt);
    }
    None
}

/// Largest alpha keeping `mat + alpha * delta` PSD across all blocks, from
/// the minimum eigenvalue of `L^-1 delta L^-T`.
fn max_step(
    mats: &[DMatrix<f64>],
    deltas: &[DMatrix<f64>],
    chols: &[nalgebra::Cholesky<f64, nalgebra::Dyn>],
) -> f64 {
    let mut alpha: f64 = 1.0e6;
    for k in 0..mats.len() {
        let l = chols[k].l();
        let y = match l.solve_lower_triangular(&deltas[k]) {
            Some(y) => y,
            None => return 1e-12,
        };
        let z = match l.solve_lower_triangular(&y.transpose()) {
            Some(z) => z,
            None => return 1e-12,
        };
        let z_sym = (&z + z.transpose()) * 0.5;
        let lambda_min = min_eig(&z_sym);
        if lambda_min < -1e-14 {
            alpha = alpha.min(-1.0 / lambda_min);
        }
    }
    alpha
}

pub(crate) fn min_eig(mat: &DMatrix<f64>) -> f64 {
    if mat.nrows() == 1 {
        return mat[(0, 0)];
    }
    let sym = (mat + mat.transpose()) * 0.5;
    nalgebra::SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_block(f0: f64, coeffs: &[(usize, f64)]) -> SdpBlock {
        let mut blk = SdpBlock::new(1);
        blk.f0[(0, 0)] = f0;
        for &(var, v) in coeffs {
            let mut sp = SparseSym::new();
            sp.push(0, 0, v);
            blk.terms.push((var, sp));
        }
        blk
    }

    // max y s.t. 1 - y >= 0 and y + 1 >= 0 has optimum y = 1.
    #[test]
    fn scalar_lp_as_sdp() {
        let prob = SdpProblem {
            num_vars: 1,
            objective: vec![1.0],
            blocks: vec![
                scalar_block(1.0, &[(0, -1.0)]),
                scalar_block(1.0, &[(0, 1.0)]),
            ],
        };
        let sol = solve(&prob, &SolveOptions::default());
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.y[0] - 1.0).abs() < 1e-6, "y = {}", sol.y[0]);
        assert!((sol.objective_value - 1.0).abs() < 1e-6);
    }

    // max -x s.t. [[x,1],[1,x]] >= 0: boundary at x = 1, objective -1.
    #[test]
    fn two_by_two_boundary() {
        let mut blk = SdpBlock::new(2);
        blk.f0[(0, 1)] = 1.0;
        blk.f0[(1, 0)] = 1.0;
        let mut sp = SparseSym::new();
        sp.push(0, 0, 1.0);
        sp.push(1, 1, 1.0);
        blk.terms.push((0, sp));
        let prob = SdpProblem {
            num_vars: 1,
            objective: vec![-1.0],
            blocks: vec![blk],
        };
        let sol = solve(&prob, &SolveOptions::default());
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.y[0] - 1.0).abs() < 1e-6, "x = {}", sol.y[0]);
        assert!((sol.objective_value + 1.0).abs() < 1e-6);
    }

    #[test]
    fn unbounded_detected() {
        // max y s.t. y >= 0.
        let prob = SdpProblem {
            num_vars: 1,
            objective: vec![1.0],
            blocks: vec![scalar_block(0.0, &[(0, 1.0)])],
        };
        let sol = solve(&prob, &SolveOptions::default());
        assert_eq!(sol.status, SdpStatus::Unbounded);
    }

    #[test]
    fn infeasible_detected() {
        // y >= 1 and -y >= 1 cannot hold together.
        let prob = SdpProblem {
            num_vars: 1,
            objective: vec![1.0],
            blocks: vec![
                scalar_block(-1.0, &[(0, 1.0)]),
                scalar_block(-1.0, &[(0, -1.0)]),
            ],
        };
        let sol = solve(&prob, &SolveOptions::default());
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn no_variable_feasibility_check() {
        let prob = SdpProblem {
            num_vars: 0,
            objective: vec![],
            blocks: vec![scalar_block(2.0, &[])],
        };
        assert_eq!(
            solve(&prob, &SolveOptions::default()).status,
            SdpStatus::Optimal
        );
        let bad = SdpProblem {
            num_vars: 0,
            objective: vec![],
            blocks: vec![scalar_block(-2.0, &[])],
        };
        assert_eq!(
            solve(&bad, &SolveOptions::default()).status,
            SdpStatus::Infeasible
        );
    }

    #[test]
    fn deterministic_iterates() {
        let mut blk = SdpBlock::new(2);
        blk.f0[(0, 0)] = 3.0;
        blk.f0[(1, 1)] = 4.0;
        let mut sp0 = SparseSym::new();
        sp0.push(0, 0, -1.0);
        let mut sp1 = SparseSym::new();
        sp1.push(1, 1, -1.0);
        sp1.push(0, 1, 0.3);
        blk.terms.push((0, sp0));
        blk.terms.push((1, sp1));
        let prob = SdpProblem {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            blocks: vec![blk],
        };
        let a = solve(&prob, &SolveOptions::default());
        let b = solve(&prob, &SolveOptions::default());
        assert_eq!(a.status, b.status);
        assert_eq!(a.y, b.y);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn weak_duality_and_witnesses_on_random_feasible_problems() {
        use crate::rng::Rng;
        let mut rng = Rng::new(12345);
        for trial in 0..10 {
            let m = 2 + (trial % 3);
            let s = 3;
            // Strictly feasible pair: S0 = I at y = 0, and b defined from a
            // random PD X0 so both sides are attained.
            let mut blk = SdpBlock::new(s);
            for r in 0..s {
                blk.f0[(r, r)] = 1.0;
            }
            let mut fs = Vec::new();
            for var in 0..m {
                let mut sp = SparseSym::new();
                for r in 0..s {
                    for c in r..s {
                        let v = rng.uniform_sym();
                        if v.abs() > 0.3 {
                            sp.push(r, c, v);
                        }
                    }
                }
                sp.push(0, 0, 0.5 + rng.uniform_01());
                fs.push(sp.clone());
                blk.terms.push((var, sp));
            }
            let g = DMatrix::from_fn(s, s, |_, _| rng.uniform_sym());
            let x0 = &g * g.transpose() + DMatrix::identity(s, s);
            let objective: Vec<f64> = fs.iter().map(|sp| -sp.dot(&x0)).collect();
            let prob = SdpProblem {
                num_vars: m,
                objective,
                blocks: vec![blk],
            };
            let opts = SolveOptions::default();
            let sol = solve(&prob, &opts);
            assert_eq!(sol.status, SdpStatus::Optimal, "trial {trial}");
            assert!(
                sol.objective_value <= sol.primal_objective + 10.0 * opts.gap_tol,
                "weak duality violated: {} > {}",
                sol.objective_value,
                sol.primal_objective
            );
            for w in &sol.block_witnesses {
                assert!(min_eig(w) >= -opts.feas_tol);
            }
        }
    }

    #[test]
    fn sdpa_dump_has_expected_shape() {
        let prob = SdpProblem {
            num_vars: 1,
            objective: vec![1.0],
            blocks: vec![scalar_block(1.0, &[(0, -1.0)])],
        };
        let text = prob.write_sdpa();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "1");
        assert_eq!(lines[1], "1");
        assert_eq!(lines[2], "1");
        assert_eq!(lines[3], "-1");
        assert!(lines.contains(&"0 1 1 1 -1"));
        assert!(lines.contains(&"1 1 1 1 -1"));
    }

    #[test]
    fn validation_catches_unused_variable() {
        let prob = SdpProblem {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            blocks: vec![scalar_block(1.0, &[(0, -1.0)])],
        };
        assert_eq!(
            prob.validate(),
            Err(SdpProblemError::UnusedVariable { var: 1 })
        );
    }
}
