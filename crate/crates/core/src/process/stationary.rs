//! Stationary laws of finite irreducible aperiodic chains.

use crate::error::{Error, Result};

/// Row tolerance for stochastic matrices.
pub const ROW_TOLERANCE: f64 = 1e-12;
/// Required `||pi P - pi||_inf` of a returned stationary law.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

const MAX_ITERATIONS: usize = 2_000_000;

/// A chain given as positive-probability successor lists.
#[derive(Clone, Debug)]
pub(crate) struct SparseChain {
    pub succ: Vec<Vec<(usize, f64)>>,
}

impl SparseChain {
    pub fn from_dense(matrix: &[Vec<f64>]) -> Self {
        SparseChain {
            succ: matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, &p)| p > 0.0)
                        .map(|(j, &p)| (j, p))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    fn step(&self, pi: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, edges) in self.succ.iter().enumerate() {
            let w = pi[i];
            if w == 0.0 {
                continue;
            }
            for &(j, p) in edges {
                out[j] += w * p;
            }
        }
    }

    /// Error message if the chain is reducible or periodic.
    pub fn ergodicity_defect(&self) -> Option<String> {
        let n = self.len();
        if n == 0 {
            return Some("chain has no states".into());
        }
        // BFS levels from state 0 on the forward graph
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.succ[u] {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(s) = level.iter().position(|&l| l == usize::MAX) {
            return Some(format!("state {s} is not reachable from state 0 (chain is reducible)"));
        }
        let mut pred: Vec<Vec<usize>> = vec![vec![]; n];
        for (u, edges) in self.succ.iter().enumerate() {
            for &(v, _) in edges {
                pred[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            for &v in &pred[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if let Some(s) = seen.iter().position(|&b| !b) {
            return Some(format!("state 0 is not reachable from state {s} (chain is reducible)"));
        }
        let mut period = 0usize;
        for (u, edges) in self.succ.iter().enumerate() {
            for &(v, _) in edges {
                let d = (level[u] + 1).abs_diff(level[v]);
                period = gcd(period, d);
            }
        }
        if period != 1 {
            return Some(format!("chain is periodic with period {period}"));
        }
        None
    }

    /// Power iteration from the uniform law. Doubly stochastic chains
    /// short-circuit to the uniform law, which is then exact.
    pub fn stationary(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let uniform = vec![1.0 / n as f64; n];
        let mut col = vec![0.0; n];
        for edges in &self.succ {
            for &(j, p) in edges {
                col[j] += p;
            }
        }
        if col.iter().all(|c| (c - 1.0).abs() <= ROW_TOLERANCE) {
            return Ok(uniform);
        }
        let mut pi = uniform;
        let mut next = vec![0.0; n];
        for _ in 0..MAX_ITERATIONS {
            self.step(&pi, &mut next);
            let total: f64 = next.iter().sum();
            next.iter_mut().for_each(|v| *v /= total);
            let delta = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            std::mem::swap(&mut pi, &mut next);
            if delta <= RESIDUAL_TOLERANCE * 0.01 {
                break;
            }
        }
        let residual = self.residual(&pi);
        if residual > RESIDUAL_TOLERANCE {
            return Err(Error::spec(
                "process",
                format!("power iteration did not converge (residual {residual:e})"),
            ));
        }
        Ok(pi)
    }

    pub fn residual(&self, pi: &[f64]) -> f64 {
        let mut out = vec![0.0; self.len()];
        self.step(pi, &mut out);
        out.iter().zip(pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks that `matrix` is row-stochastic; `field` prefixes error messages.
pub(crate) fn check_stochastic(matrix: &[Vec<f64>], cols: usize, field: &str) -> Result<()> {
    if matrix.is_empty() {
        return Err(Error::spec(field, "matrix has no rows"));
    }
    for (i, row) in matrix.iter().enumerate() {
        let f = format!("{field}[{i}]");
        if row.len() != cols {
            return Err(Error::spec(
                f,
                format!("row has {} entries, expected {cols}", row.len()),
            ));
        }
        if let Some(j) = row.iter().position(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::spec(
                f,
                format!("entry {j} is {} (must be finite and >= 0)", row[j]),
            ));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_TOLERANCE {
            return Err(Error::spec(f, format!("row sums to {sum}, expected 1")));
        }
    }
    Ok(())
}

/// Stationary law `pi` of a row-stochastic, irreducible, aperiodic matrix,
/// with `||pi P - pi||_inf <= 1e-12`.
pub fn stationary_distribution(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_stochastic(transition, transition.len(), "transition")?;
    let chain = SparseChain::from_dense(transition);
    if let Some(defect) = chain.ergodicity_defect() {
        return Err(Error::spec("transition", defect));
    }
    chain.stationary()
}
