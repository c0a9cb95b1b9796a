//! Dense polynomials over a [`FiniteField`], coefficients stored constant term first.

use super::{Elem, FiniteField};

pub(crate) fn trim(f: &FiniteField, mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last().is_some_and(|&c| c == f.zero()) {
        a.pop();
    }
    a
}

pub(crate) fn mul(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Remainder of `a` modulo `m`. `m` must be nonzero after trimming.
pub(crate) fn rem(f: &FiniteField, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let m = trim(f, m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    let mut r = trim(f, a.to_vec());
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        r = trim(f, r);
    }
    r
}

/// Monic polynomial of the given degree whose lower coefficients are the
/// base-`|f|` digits of `index`, least significant first.
pub(crate) fn monic_from_index(f: &FiniteField, degree: usize, mut index: u64) -> Vec<Elem> {
    let q = f.order() as u64;
    let mut out = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        out.push((index % q) as Elem);
        index /= q;
    }
    out.push(f.one());
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(f: &FiniteField, modulus: &[Elem]) -> bool {
    let deg = modulus.len() - 1;
    let q = f.order() as u64;
    for k in 1..=deg / 2 {
        for idx in 0..q.pow(k as u32) {
            let g = monic_from_index(f, k, idx);
            if rem(f, modulus, &g).is_empty() {
                return false;
            }
        }
    }
    true
}
