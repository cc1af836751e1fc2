//! Arithmetic in the normed division algebras ℝ, ℂ, ℍ and 𝕆.
//!
//! Every algebra shares one multiplication table on the basis
//! `(1, e₁, …, e₇)`. ℂ, ℍ and 𝕆 are the spans of the first 2, 4 and 8 basis
//! elements. The octonion table is the Fano-plane convention in which each
//! index triple
//!
//! ```text
//! (1,2,3) (1,4,5) (2,4,6) (3,4,7) (2,5,7) (3,6,5) (1,7,6)
//! ```
//!
//! is cyclically positive, i.e. `e₁e₂ = e₃`, `e₂e₃ = e₁`, `e₃e₁ = e₂` and the
//! reversed products carry a minus sign. Restricted to `(1, e₁, e₂, e₃)` this
//! is the quaternion table with `i = e₁`, `j = e₂`, `k = e₃`.
//!
//! Sign convention of the Cayley form: with the triple cross product
//! `x × y × z = ½(x(ȳz) − z(ȳx))` one gets `1 × i × j = −k`, hence
//! `Φ(1, i, j, k) = −1`. Only `|Φ|` is used for classification.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which division algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraTag {
    R,
    C,
    H,
    O,
}

impl AlgebraTag {
    pub const ALL: [AlgebraTag; 4] = [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H, AlgebraTag::O];

    /// Real dimension: 1, 2, 4 or 8.
    pub const fn real_dim(self) -> usize {
        match self {
            AlgebraTag::R => 1,
            AlgebraTag::C => 2,
            AlgebraTag::H => 4,
            AlgebraTag::O => 8,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AlgebraTag::R => "R",
            AlgebraTag::C => "C",
            AlgebraTag::H => "H",
            AlgebraTag::O => "O",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" => Ok(AlgebraTag::R),
            "C" | "c" => Ok(AlgebraTag::C),
            "H" | "h" => Ok(AlgebraTag::H),
            "O" | "o" => Ok(AlgebraTag::O),
            other => Err(invalid(format!("unknown algebra `{other}` (expected R, C, H or O)"))),
        }
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

const FANO: [[usize; 3]; 7] = [[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 4, 7], [2, 5, 7], [3, 6, 5], [1, 7, 6]];

/// `TABLE[a][b] = (sign, c)` with `e_a e_b = sign · e_c`.
const TABLE: [[(i8, u8); 8]; 8] = build_table();

const fn build_table() -> [[(i8, u8); 8]; 8] {
    let mut t = [[(0i8, 0u8); 8]; 8];
    let mut a = 0;
    while a < 8 {
        t[0][a] = (1, a as u8);
        t[a][0] = (1, a as u8);
        if a > 0 {
            t[a][a] = (-1, 0);
        }
        a += 1;
    }
    let mut l = 0;
    while l < 7 {
        let [p, q, r] = FANO[l];
        let cyc = [[p, q, r], [q, r, p], [r, p, q]];
        let mut c = 0;
        while c < 3 {
            let [x, y, z] = cyc[c];
            t[x][y] = (1, z as u8);
            t[y][x] = (-1, z as u8);
            c += 1;
        }
        l += 1;
    }
    t
}

/// An element of ℝ, ℂ, ℍ or 𝕆 stored as real coordinates in the basis
/// `(1, e₁, …, e_{d−1})`. Coordinates beyond the real dimension are zero.
#[derive(Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    tag: AlgebraTag,
    coords: [f64; 8],
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.tag, self.coords())
    }
}

impl AlgebraElement {
    pub fn new(tag: AlgebraTag, coords: &[f64]) -> Result<Self> {
        if coords.len() != tag.real_dim() {
            return Err(invalid(format!("{} element needs {} coordinates, got {}", tag, tag.real_dim(), coords.len())));
        }
        let mut c = [0.0; 8];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self { tag, coords: c })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        Self { tag, coords: [0.0; 8] }
    }

    pub fn one(tag: AlgebraTag) -> Self {
        Self::basis(tag, 0)
    }

    /// The basis element `e_index` (`e₀ = 1`).
    ///
    /// Panics if `index >= tag.real_dim()`.
    pub fn basis(tag: AlgebraTag, index: usize) -> Self {
        assert!(index < tag.real_dim(), "basis index {index} out of range for {tag}");
        let mut coords = [0.0; 8];
        coords[index] = 1.0;
        Self { tag, coords }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.tag.real_dim()]
    }

    pub fn real_part(&self) -> f64 {
        self.coords[0]
    }

    pub fn conjugate(&self) -> Self {
        let mut c = self.coords;
        for x in c.iter_mut().skip(1) {
            *x = -*x;
        }
        Self { tag: self.tag, coords: c }
    }

    pub fn imaginary_part(&self) -> Self {
        let mut c = self.coords;
        c[0] = 0.0;
        Self { tag: self.tag, coords: c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords.iter().zip(other.coords.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.coords;
        for x in c.iter_mut() {
            *x *= s;
        }
        Self { tag: self.tag, coords: c }
    }

    pub fn is_imaginary(&self, tol: f64) -> bool {
        self.coords[0].abs() <= tol
    }

    /// Bilinear product from the shared table.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.tag != other.tag {
            return Err(invalid(format!("cannot multiply {} by {}", self.tag, other.tag)));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.tag.real_dim();
        let mut out = [0.0; 8];
        for (row, &xa) in TABLE.iter().zip(&self.coords[..d]) {
            if xa == 0.0 {
                continue;
            }
            for (&(s, c), &yb) in row.iter().zip(&other.coords[..d]) {
                if yb != 0.0 {
                    out[c as usize] += f64::from(s) * xa * yb;
                }
            }
        }
        Self { tag: self.tag, coords: out }
    }

    fn require(&self, tag: AlgebraTag) -> Result<()> {
        if self.tag != tag {
            return Err(invalid(format!("expected an element of {tag}, got {}", self.tag)));
        }
        Ok(())
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;

    /// Panics on mismatched tags; use [`AlgebraElement::try_mul`] for a checked product.
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "algebra tag mismatch");
        self.mul_unchecked(&rhs)
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.tag, rhs.tag, "algebra tag mismatch");
        let mut c = self.coords;
        for (x, y) in c.iter_mut().zip(rhs.coords.iter()) {
            *x += y;
        }
        Self { tag: self.tag, coords: c }
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Multiplies two elements of the same algebra.
pub fn multiply(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    x.try_mul(y)
}

/// Triple cross product `½(x(ȳz) − z(ȳx))` on 𝕆.
pub fn triple_cross(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<AlgebraElement> {
    for e in [x, y, z] {
        e.require(AlgebraTag::O)?;
    }
    let yb = y.conjugate();
    let a = *x * (yb * *z);
    let b = *z * (yb * *x);
    Ok((a - b).scale(0.5))
}

/// Cayley 4-form `Φ(x, y, z, w) = ⟨x × y × z, w⟩`.
pub fn cayley_4form(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement, w: &AlgebraElement) -> Result<f64> {
    w.require(AlgebraTag::O)?;
    Ok(triple_cross(x, y, z)?.dot(w))
}

/// All 8⁴ components `Φ_{abcd}` in the standard basis, flattened as
/// `((a·8 + b)·8 + c)·8 + d`.
pub fn cayley_tensor() -> Vec<f64> {
    let e: Vec<AlgebraElement> = (0..8).map(|i| AlgebraElement::basis(AlgebraTag::O, i)).collect();
    let mut out = vec![0.0; 8 * 8 * 8 * 8];
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                let t = triple_cross(&e[a], &e[b], &e[c]).expect("octonion inputs");
                for d in 0..8 {
                    out[((a * 8 + b) * 8 + c) * 8 + d] = t.coords[d];
                }
            }
        }
    }
    out
}

/// A stored triple `(x, y, z)` with `(xy)z ≠ x(yz)` in 𝕆.
pub fn nonassociative_witness() -> [AlgebraElement; 3] {
    let e = |i| AlgebraElement::basis(AlgebraTag::O, i);
    [e(1), e(2), e(4)]
}

/// Matrix of `x ↦ x·q` in the basis `(1, e₁, …)`, row-major `d × d`.
pub fn right_mult_matrix(q: &AlgebraElement) -> Vec<f64> {
    mult_matrix(q, true)
}

/// Matrix of `x ↦ q·x` in the basis `(1, e₁, …)`, row-major `d × d`.
pub fn left_mult_matrix(q: &AlgebraElement) -> Vec<f64> {
    mult_matrix(q, false)
}

fn mult_matrix(q: &AlgebraElement, right: bool) -> Vec<f64> {
    let d = q.tag.real_dim();
    let mut m = vec![0.0; d * d];
    for col in 0..d {
        let e = AlgebraElement::basis(q.tag, col);
        let img = if right { e * *q } else { *q * e };
        for row in 0..d {
            m[row * d + col] = img.coords[row];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(tag: AlgebraTag, rng: &mut ChaCha8Rng) -> AlgebraElement {
        let c: Vec<f64> = (0..tag.real_dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        AlgebraElement::new(tag, &c).unwrap()
    }

    fn e(tag: AlgebraTag, i: usize) -> AlgebraElement {
        AlgebraElement::basis(tag, i)
    }

    #[test]
    fn quaternion_relations() {
        let h = AlgebraTag::H;
        assert_eq!(e(h, 1) * e(h, 2), e(h, 3));
        assert_eq!(e(h, 2) * e(h, 3), e(h, 1));
        assert_eq!(e(h, 3) * e(h, 1), e(h, 2));
        assert_eq!(e(h, 2) * e(h, 1), -e(h, 3));
        assert_eq!(e(h, 1) * e(h, 1), -AlgebraElement::one(h));
    }

    #[test]
    fn octonion_unit_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let one = AlgebraElement::one(AlgebraTag::O);
        for _ in 0..100 {
            let x = random(AlgebraTag::O, &mut rng);
            let y = random(AlgebraTag::O, &mut rng);
            assert_eq!(x * one, x);
            assert_eq!(one * x, x);
            assert!(((x * y).norm() - x.norm() * y.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_tags_rejected() {
        let x = AlgebraElement::one(AlgebraTag::H);
        let y = AlgebraElement::one(AlgebraTag::O);
        assert!(multiply(&x, &y).is_err());
        assert!(AlgebraElement::new(AlgebraTag::C, &[1.0]).is_err());
    }

    #[test]
    fn conjugate_norm_imaginary() {
        let one = AlgebraElement::one(AlgebraTag::H);
        assert_eq!(one.conjugate(), one);
        let x = AlgebraElement::new(AlgebraTag::C, &[3.0, 1.0]).unwrap();
        assert_eq!(x.imaginary_part(), e(AlgebraTag::C, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for tag in AlgebraTag::ALL {
            let x = random(tag, &mut rng);
            let p = x * x.conjugate();
            assert!((p.real_part() - x.norm_sqr()).abs() < 1e-14);
            assert!(p.imaginary_part().norm() < 1e-14);
        }
    }

    #[test]
    fn associative_below_octonions_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for tag in [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H] {
            for _ in 0..50 {
                let (x, y, z) = (random(tag, &mut rng), random(tag, &mut rng), random(tag, &mut rng));
                assert!(((x * y) * z - x * (y * z)).norm() < 1e-14);
            }
        }
        let [x, y, z] = nonassociative_witness();
        assert!(((x * y) * z - x * (y * z)).norm() > 1.0);
    }

    #[test]
    fn alternativity_and_right_mult_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x = random(AlgebraTag::O, &mut rng);
            let y = random(AlgebraTag::O, &mut rng);
            assert!((x * (x * y) - (x * x) * y).norm() < 1e-13);
            assert!(((y * x) * x - y * (x * x)).norm() < 1e-13);
            let z = random(AlgebraTag::O, &mut rng).imaginary_part();
            assert!(((x * z) * z + x.scale(z.norm_sqr())).norm() < 1e-13);
        }
    }

    #[test]
    fn triple_cross_basis_value() {
        // Expansion by hand: ī·j = −k, j·(ī·1) = j·(−i) = k, so ½(−k − k) = −k.
        let o = |i| e(AlgebraTag::O, i);
        let t = triple_cross(&o(0), &o(1), &o(2)).unwrap();
        assert_eq!(t, -o(3));
        assert_eq!(cayley_4form(&o(0), &o(1), &o(2), &o(3)).unwrap(), -1.0);
        assert!(triple_cross(&e(AlgebraTag::H, 0), &o(1), &o(2)).is_err());
    }

    #[test]
    fn triple_cross_alternating() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let x = random(AlgebraTag::O, &mut rng);
            let z = random(AlgebraTag::O, &mut rng);
            assert!(triple_cross(&x, &x, &z).unwrap().norm() < 1e-12);
            assert!(cayley_4form(&x, &z, &x, &z).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn cayley_tensor_is_alternating() {
        let t = cayley_tensor();
        let at = |a: usize, b: usize, c: usize, d: usize| t[((a * 8 + b) * 8 + c) * 8 + d];
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    for d in 0..8 {
                        let v = at(a, b, c, d);
                        assert_eq!(v, -at(b, a, c, d));
                        assert_eq!(v, -at(a, c, b, d));
                        assert_eq!(v, -at(a, b, d, c));
                    }
                }
            }
        }
        // 14 index sets carry ±1, each with 4! orderings.
        assert_eq!(t.iter().filter(|v| v.abs() > 0.5).count(), 14 * 24);
    }

    #[test]
    fn mult_matrices_match_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let q = random(AlgebraTag::O, &mut rng);
        let x = random(AlgebraTag::O, &mut rng);
        let r = right_mult_matrix(&q);
        let l = left_mult_matrix(&q);
        let xq = x * q;
        let qx = q * x;
        for row in 0..8 {
            let rr: f64 = (0..8).map(|c| r[row * 8 + c] * x.coords()[c]).sum();
            let ll: f64 = (0..8).map(|c| l[row * 8 + c] * x.coords()[c]).sum();
            assert!((rr - xq.coords()[row]).abs() < 1e-14);
            assert!((ll - qx.coords()[row]).abs() < 1e-14);
        }
    }
}
