//! Exhaustive lag search without refitting every candidate.
//!
//! All candidates are estimated on the sample common to the largest model.
//! Each candidate's design is a subset of the columns of that largest
//! design, and candidates nest: raising one lag order appends one column.
//! The search therefore forms the Gram matrix of the full design once and
//! walks the grid depth-first, extending or shrinking a Cholesky factor by
//! one column per step. The residual sum of squares of a candidate is
//! `y'y − ‖z‖²` with `z = L⁻¹X'y`.

use super::{ArdlOrders, ArdlSpec};
use crate::dataio::Dataset;
use crate::linalg::{dot, Matrix};
use crate::par::{map_range, Exec};
use crate::regression::{Design, RegressionSpec, SeriesRef, Term};
use crate::{Error, Result};

/// Squared distance of a unit-norm column from the span of the columns
/// already in the model, below which the candidate counts as rank
/// deficient. The Gram route resolves about half the digits of a QR, so
/// this is looser than the QR tolerance.
const GRAM_TOL: f64 = 1e-12;

pub(super) struct Outcome {
    pub trace: Vec<f64>,
    pub best: usize,
    pub n: usize,
}

/// Column positions in the full design.
struct Layout {
    always: Vec<usize>,
    dy: Vec<usize>,
    dx: Vec<Vec<usize>>,
}

pub(super) fn decode(spec: &ArdlSpec, mut index: usize) -> ArdlOrders {
    let mut q = vec![0; spec.regressors.len()];
    for (j, r) in spec.regressors.iter().enumerate().rev() {
        q[j] = index % (r.max_lag + 1);
        index /= r.max_lag + 1;
    }
    ArdlOrders { p: index + 1, q }
}

pub(super) fn run(spec: &ArdlSpec, data: &Dataset, exec: Exec) -> Result<Outcome> {
    let start = spec.max_offset();
    let mut terms: Vec<Term> = spec.level_terms();
    let n_det = usize::from(spec.case.has_intercept()) + usize::from(spec.case.has_trend());
    let mut layout = Layout { always: (0..n_det + terms.len()).collect(), dy: Vec::new(), dx: Vec::new() };
    for i in 1..=spec.max_p {
        layout.dy.push(n_det + terms.len());
        terms.push(SeriesRef::diffed(spec.dependent.clone()).at(i));
    }
    for r in &spec.regressors {
        let mut cols = Vec::new();
        for i in 0..=r.max_lag {
            cols.push(n_det + terms.len());
            terms.push(SeriesRef::diffed(r.name.clone()).at(i));
        }
        layout.dx.push(cols);
    }
    let k_max = n_det + terms.len();
    if data.len() <= start + k_max {
        return Err(Error::TooShort { needed: start + k_max + 1, got: data.len() });
    }
    let full = RegressionSpec::new(SeriesRef::diffed(spec.dependent.clone()), terms)
        .with_intercept(spec.case.has_intercept())
        .with_trend(spec.case.has_trend())
        .with_sample_start(start);
    let design = Design::build(&full, data)?;
    let n = design.n();
    let (gram, xy, yy) = scaled_gram(&design);

    // One task per (p, q_1) prefix; results concatenate in enumeration order.
    let q1 = spec.regressors[0].max_lag + 1;
    let chunks = map_range(exec, spec.max_p * q1, |task| {
        let (p, lag1) = (task / q1 + 1, task % q1);
        let mut chol = IncrementalCholesky::new(&gram, &xy, yy);
        layout.always.iter().chain(&layout.dy[..p]).chain(&layout.dx[0][..=lag1]).for_each(|&c| chol.push(c));
        let mut out = Vec::new();
        walk(&mut chol, &layout, 1, n, spec.criterion, &mut out);
        out
    });
    let trace: Vec<f64> = chunks.into_iter().flatten().collect();
    debug_assert_eq!(trace.len(), spec.grid_size());

    // Smallest criterion; ties go to fewer total lags, then to the
    // lexicographically smaller orders, which come first in the trace.
    let mut best = 0;
    let mut best_total = decode(spec, 0).total();
    for (i, &v) in trace.iter().enumerate().skip(1) {
        if v < trace[best] || (v == trace[best] && decode(spec, i).total() < best_total) {
            best = i;
            best_total = decode(spec, i).total();
        }
    }
    Ok(Outcome { trace, best, n })
}

fn walk(chol: &mut IncrementalCholesky, layout: &Layout, j: usize, n: usize, crit: crate::regression::InfoCriterion, out: &mut Vec<f64>) {
    if j == layout.dx.len() {
        out.push(match chol.ssr() {
            Some(ssr) if ssr > 0.0 => crit.from_ssr(ssr, n, chol.len()),
            _ => f64::INFINITY,
        });
        return;
    }
    for &c in &layout.dx[j] {
        chol.push(c);
        walk(chol, layout, j + 1, n, crit, out);
    }
    for _ in &layout.dx[j] {
        chol.pop();
    }
}

/// Gram matrix of the unit-normalized columns, `X'y` on the same scale, and `y'y`.
fn scaled_gram(design: &Design) -> (Matrix, Vec<f64>, f64) {
    let k = design.k();
    let cols: Vec<Vec<f64>> = (0..k).map(|j| design.x.column(j)).collect();
    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let scale = |j: usize| if norms[j] > 0.0 { 1.0 / norms[j] } else { 0.0 };
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let v = dot(&cols[i], &cols[j]) * scale(i) * scale(j);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let xy = (0..k).map(|j| dot(&cols[j], &design.y) * scale(j)).collect();
    (g, xy, dot(&design.y, &design.y))
}

/// Cholesky factor of a growing principal submatrix of the Gram matrix.
struct IncrementalCholesky<'a> {
    gram: &'a Matrix,
    xy: &'a [f64],
    yy: f64,
    cols: Vec<usize>,
    /// Packed lower triangle, row `i` at offset `i(i+1)/2`.
    l: Vec<f64>,
    z: Vec<f64>,
    /// Running `Σ z²` after each accepted column.
    zz: Vec<f64>,
    /// Pushes made since the factor last became singular.
    deficient: usize,
    pushed: usize,
    scratch: Vec<f64>,
}

impl<'a> IncrementalCholesky<'a> {
    fn new(gram: &'a Matrix, xy: &'a [f64], yy: f64) -> Self {
        IncrementalCholesky { gram, xy, yy, cols: Vec::new(), l: Vec::new(), z: Vec::new(), zz: Vec::new(), deficient: 0, pushed: 0, scratch: Vec::new() }
    }

    fn len(&self) -> usize {
        self.pushed
    }

    fn push(&mut self, c: usize) {
        self.pushed += 1;
        if self.deficient > 0 {
            self.deficient += 1;
            return;
        }
        let k = self.cols.len();
        let mut row = std::mem::take(&mut self.scratch);
        row.clear();
        for i in 0..k {
            let li = &self.l[i * (i + 1) / 2..(i + 1) * (i + 2) / 2];
            let s = self.gram[(self.cols[i], c)] - dot(&li[..i], &row[..i]);
            row.push(s / li[i]);
        }
        let d = self.gram[(c, c)] - dot(&row, &row);
        if !(d > GRAM_TOL) {
            self.deficient = 1;
            self.scratch = row;
            return;
        }
        let diag = d.sqrt();
        let zk = (self.xy[c] - dot(&row, &self.z)) / diag;
        self.l.extend_from_slice(&row);
        self.l.push(diag);
        self.scratch = row;
        self.z.push(zk);
        self.zz.push(self.zz.last().copied().unwrap_or(0.0) + zk * zk);
        self.cols.push(c);
    }

    fn pop(&mut self) {
        self.pushed -= 1;
        if self.deficient > 0 {
            self.deficient -= 1;
            return;
        }
        let k = self.cols.len() - 1;
        self.l.truncate(k * (k + 1) / 2);
        self.z.pop();
        self.zz.pop();
        self.cols.pop();
    }

    fn ssr(&self) -> Option<f64> {
        if self.deficient > 0 {
            return None;
        }
        Some((self.yy - self.zz.last().copied().unwrap_or(0.0)).max(0.0))
    }
}
