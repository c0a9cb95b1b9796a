use serde::Serialize;

use crate::model::GoodSubspace;

/// Codimensions `c_n = codim_U C_n(phi, U)` for `n = 1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodimTrace {
    #[serde(skip)]
    pub u: GoodSubspace,
    /// `values[n - 1] = c_n`.
    pub values: Vec<usize>,
    /// Window used for each `n`.
    pub windows: Vec<usize>,
}

impl CodimTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `c_n`, 1-based.
    pub fn codim(&self, n: usize) -> usize {
        self.values[n - 1]
    }

    /// `c_{n+1} - c_n` for `n = 1..N`. Empty if the trace is not
    /// non-decreasing.
    pub fn differences(&self) -> Vec<usize> {
        self.values
            .windows(2)
            .map(|w| w[1].checked_sub(w[0]))
            .collect::<Option<Vec<_>>>()
            .unwrap_or_default()
    }

    /// Length of the final run of equal first differences.
    pub fn final_streak(&self) -> usize {
        let d = self.differences();
        match d.last() {
            None => 0,
            Some(&last) => d.iter().rev().take_while(|&&x| x == last).count(),
        }
    }

    /// Structural properties every cotrajectory sequence has:
    /// `c_1 = 0`, non-decreasing, non-increasing first differences, and
    /// `c_{n+m-1} <= c_n + c_m`. Returns a description of each failure.
    ///
    /// Plain subadditivity `c_{n+m} <= c_n + c_m` does not hold in general
    /// (the shift has `c_2 = 1 > 2 c_1`); the shifted sequence
    /// `a_n = c_{n+1}` is the subadditive one.
    pub fn violations(&self) -> Vec<String> {
        let c = &self.values;
        let mut out = Vec::new();
        if c.first().is_some_and(|&x| x != 0) {
            out.push(format!("c_1 = {} is not 0", c[0]));
        }
        for n in 1..c.len() {
            if c[n] < c[n - 1] {
                out.push(format!("c_{} < c_{}", n + 1, n));
            }
        }
        if out.is_empty() {
            let d = self.differences();
            for i in 1..d.len() {
                if d[i] > d[i - 1] {
                    out.push(format!("difference grows at n = {}", i + 1));
                }
            }
        }
        let len = c.len();
        for n in 1..=len {
            for m in 1..=len {
                if n + m - 1 <= len && c[n + m - 2] > c[n - 1] + c[m - 1] {
                    out.push(format!("c_{} > c_{} + c_{}", n + m - 1, n, m));
                }
            }
        }
        out
    }
}
