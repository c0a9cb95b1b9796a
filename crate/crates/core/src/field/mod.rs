//! Finite fields presented as towers of quotient rings over a prime field.
//!
//! A field is either `GF(p)` or `B[y]/(m(y))` for a previously built field `B`
//! and a monic irreducible `m` over `B`. Elements are coefficient vectors over
//! the prime field, packed into a single integer: an element of `B[y]/(m)` with
//! coefficients `c_0, ..., c_{n-1}` in `B` is `sum c_j * |B|^j`. With this
//! packing an element of any field in the tower keeps the same integer in
//! every field above it, which makes the tower embeddings trivial to apply.

mod embedding;
pub(crate) mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use embedding::FieldEmbedding;

use crate::error::{Error, Result};

/// A field element in packed prime-coordinate form. Only meaningful together
/// with the [`FiniteField`] it belongs to.
pub type Elem = u32;

const MAX_ORDER: u64 = 1 << 24;
const TABLE_ORDER: u32 = 1024;

#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    base: Option<FiniteField>,
    modulus: Vec<Elem>,
    degree: usize,
    abs_degree: usize,
    order: u32,
    tables: Option<Tables>,
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// `GF(p)`. The prime is checked by trial division and must be below 2^16.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 16 {
            return Err(Error::FieldTooLarge(format!("prime {p} is not below 2^16")));
        }
        Ok(Self {
            inner: Arc::new(Inner {
                p: p as u32,
                base: None,
                modulus: vec![0, 1],
                degree: 1,
                abs_degree: 1,
                order: p as u32,
                tables: None,
            }),
        })
    }

    /// Adjoins a root of `modulus` (coefficients in `self`, constant term
    /// first) and returns the new field with its canonical power-basis
    /// embedding.
    pub fn extend(&self, modulus: &[Elem]) -> Result<(FiniteField, FieldEmbedding)> {
        if modulus.len() < 3 {
            return Err(Error::InvalidModulus(format!(
                "degree {} is below 2",
                modulus.len().saturating_sub(1)
            )));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= self.order()) {
            return Err(Error::InvalidModulus(format!(
                "coefficient {c} is not an element of {self}"
            )));
        }
        if *modulus.last().unwrap() != self.one() {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        let degree = modulus.len() - 1;
        let order = (self.order() as u64).checked_pow(degree as u32).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::FieldTooLarge(format!(
                "{}^{degree} exceeds 2^24 elements",
                self.order()
            )));
        }
        if !poly::is_irreducible(self, modulus) {
            return Err(Error::Reducible(self.to_string()));
        }
        let mut field = FiniteField {
            inner: Arc::new(Inner {
                p: self.characteristic(),
                base: Some(self.clone()),
                modulus: modulus.to_vec(),
                degree,
                abs_degree: degree * self.abs_degree(),
                order: order as u32,
                tables: None,
            }),
        };
        if field.order() <= TABLE_ORDER {
            let tables = field.build_tables();
            Arc::get_mut(&mut field.inner).expect("unshared").tables = Some(tables);
        }
        let embedding = FieldEmbedding::power_basis(self, &field);
        Ok((field, embedding))
    }

    /// Extension of the given degree by the least irreducible monic
    /// polynomial, ordering candidates by their packed lower coefficients
    /// (highest coefficient most significant).
    pub fn extend_by_degree(&self, degree: usize) -> Result<(FiniteField, FieldEmbedding)> {
        self.extend(&self.least_irreducible(degree)?)
    }

    /// The least irreducible monic polynomial of `degree` over this field.
    pub fn least_irreducible(&self, degree: usize) -> Result<Vec<Elem>> {
        if degree == 0 {
            return Err(Error::InvalidModulus("degree 0".into()));
        }
        let q = self.order() as u64;
        let count = q.checked_pow(degree as u32).unwrap_or(u64::MAX);
        if count > MAX_ORDER {
            return Err(Error::FieldTooLarge(format!("{q}^{degree} exceeds 2^24 elements")));
        }
        (0..count)
            .map(|idx| poly::monic_from_index(self, degree, idx))
            .find(|m| poly::is_irreducible(self, m))
            .ok_or_else(|| Error::InvalidModulus(format!("no irreducible of degree {degree}")))
    }

    fn build_tables(&self) -> Tables {
        let q = self.order();
        let n = (q * q) as usize;
        let mut add = Vec::with_capacity(n);
        let mut mul = Vec::with_capacity(n);
        for a in 0..q {
            for b in 0..q {
                add.push(self.add(a, b) as u16);
                mul.push(self.mul(a, b) as u16);
            }
        }
        let neg = (0..q).map(|a| self.neg(a) as u16).collect();
        let inv = (0..q).map(|a| self.inv(a).unwrap_or(0) as u16).collect();
        Tables { add, mul, neg, inv }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Degree over the prime field.
    pub fn abs_degree(&self) -> usize {
        self.inner.abs_degree
    }

    /// Degree over the field this one was built from (1 for a prime field).
    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn base(&self) -> Option<&FiniteField> {
        self.inner.base.as_ref()
    }

    /// Defining modulus over [`Self::base`]; `x` for a prime field.
    pub fn modulus(&self) -> &[Elem] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.base.is_none()
    }

    pub fn is_gf2(&self) -> bool {
        self.inner.order == 2
    }

    /// Fields from the prime field up to and including `self`.
    pub fn tower(&self) -> Vec<FiniteField> {
        let mut out = vec![self.clone()];
        while let Some(b) = out.last().unwrap().base() {
            out.push(b.clone());
        }
        out.reverse();
        out
    }

    /// Whether `self` appears in the tower of `other`.
    pub fn is_subfield_of(&self, other: &FiniteField) -> bool {
        other.tower().iter().any(|f| f == self)
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.order()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order()
    }

    fn base_digits(&self, mut a: Elem) -> Vec<Elem> {
        let b = self.inner.base.as_ref().expect("extension field").order();
        (0..self.inner.degree)
            .map(|_| {
                let d = a % b;
                a /= b;
                d
            })
            .collect()
    }

    fn pack_digits(&self, digits: &[Elem]) -> Elem {
        let b = self.inner.base.as_ref().expect("extension field").order();
        digits.iter().rev().fold(0, |acc, &d| acc * b + d)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            return t.add[(a * inner.order + b) as usize] as Elem;
        }
        match &inner.base {
            None => (a + b) % inner.p,
            Some(base) => {
                if inner.p == 2 {
                    return a ^ b;
                }
                let x = self.base_digits(a);
                let y = self.base_digits(b);
                let s: Vec<Elem> = x.iter().zip(&y).map(|(&u, &v)| base.add(u, v)).collect();
                self.pack_digits(&s)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            return t.neg[a as usize] as Elem;
        }
        match &inner.base {
            None => (inner.p - a) % inner.p,
            Some(base) => {
                let x: Vec<Elem> = self.base_digits(a).into_iter().map(|u| base.neg(u)).collect();
                self.pack_digits(&x)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            return t.mul[(a * inner.order + b) as usize] as Elem;
        }
        match &inner.base {
            None => ((a as u64 * b as u64) % inner.p as u64) as Elem,
            Some(base) => {
                let x = poly::trim(base, self.base_digits(a));
                let y = poly::trim(base, self.base_digits(b));
                let mut r = poly::rem(base, &poly::mul(base, &x, &y), &inner.modulus);
                r.resize(inner.degree, 0);
                self.pack_digits(&r)
            }
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.inner.tables {
            return Some(t.inv[a as usize] as Elem);
        }
        Some(self.pow(a, self.order() as u64 - 2))
    }

    /// The least element (by packed index) generating the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        let n = self.order() as u64 - 1;
        if n == 1 {
            return 1;
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.order())
            .find(|&a| factors.iter().all(|&f| self.pow(a, n / f) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Coordinates over the prime field, least significant first.
    pub fn prime_coords(&self, mut a: Elem) -> Vec<u32> {
        let p = self.characteristic();
        (0..self.abs_degree())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    /// Packs prime-field coordinates, reducing each modulo `p`. Missing
    /// trailing coordinates count as zero.
    pub fn from_prime_coords(&self, coords: &[u64]) -> Result<Elem> {
        if coords.len() > self.abs_degree() {
            return Err(Error::InvalidSpec(format!(
                "{} coordinates given for an element of {self} (degree {})",
                coords.len(),
                self.abs_degree()
            )));
        }
        let p = self.characteristic() as u64;
        Ok(coords.iter().rev().fold(0u64, |acc, &c| acc * p + c % p) as Elem)
    }

    /// Serializable tower description.
    pub fn descriptor(&self) -> FieldDescriptor {
        let tower = self.tower();
        let levels = tower
            .windows(2)
            .map(|w| {
                let (base, ext) = (&w[0], &w[1]);
                ext.modulus()
                    .iter()
                    .map(|&c| {
                        if base.is_prime_field() {
                            Coeff::Int(c as u64)
                        } else {
                            Coeff::Coords(base.prime_coords(c).into_iter().map(u64::from).collect())
                        }
                    })
                    .collect()
            })
            .collect();
        FieldDescriptor {
            p: self.characteristic() as u64,
            tower: levels,
        }
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        let mut field = FiniteField::prime(desc.p)?;
        for level in &desc.tower {
            let modulus = level.iter().map(|c| c.to_elem(&field)).collect::<Result<Vec<_>>>()?;
            field = field.extend(&modulus)?.0;
        }
        Ok(field)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.modulus == other.inner.modulus
                && self.inner.base == other.inner.base)
    }
}

impl Eq for FiniteField {}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order())
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}; p={}, tower={:?})",
            self.order(),
            self.characteristic(),
            self.descriptor().tower
        )
    }
}

/// Field descriptor used in configuration files: `{"p": 2, "tower": [[1, 1, 1]]}`
/// is `GF(2)[x]/(x^2 + x + 1)`. Each tower level lists the coefficients of its
/// modulus over the previous level, constant term first. Coefficients from a
/// non-prime level are written as prime-coordinate lists; a bare integer is
/// accepted as an element of the prime subfield.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    #[serde(default)]
    pub tower: Vec<Vec<Coeff>>,
}

/// A field element in a spec file: an integer (prime subfield) or a list of
/// prime-field coordinates, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(u64),
    Coords(Vec<u64>),
}

impl Coeff {
    pub fn to_elem(&self, field: &FiniteField) -> Result<Elem> {
        match self {
            Coeff::Int(c) => field.from_prime_coords(&[*c]),
            Coeff::Coords(cs) => field.from_prime_coords(cs),
        }
    }

    pub fn from_elem(field: &FiniteField, a: Elem) -> Self {
        Coeff::Coords(field.prime_coords(a).into_iter().map(u64::from).collect())
    }
}
