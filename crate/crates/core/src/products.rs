//! Tensor products, strong products with a clique, and coloring lifts.
//!
//! Product vertices use a row-major layout: `(left, right)` sits at index
//! `left * right_size + right`. Reports print pairs 1-based.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::chromatic::{is_proper, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Guard};

/// A vertex of a product graph; both coordinates 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductVertex {
    pub left: usize,
    pub right: usize,
}

impl fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left + 1, self.right + 1)
    }
}

impl Serialize for ProductVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Index arithmetic for a product whose factors have `left_size` and `right_size` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductLayout {
    pub left_size: usize,
    pub right_size: usize,
}

impl ProductLayout {
    pub fn new(left_size: usize, right_size: usize) -> Self {
        ProductLayout {
            left_size,
            right_size,
        }
    }

    pub fn len(&self) -> usize {
        self.left_size * self.right_size
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, v: ProductVertex) -> usize {
        debug_assert!(v.left < self.left_size && v.right < self.right_size);
        v.left * self.right_size + v.right
    }

    pub fn vertex(&self, index: usize) -> ProductVertex {
        ProductVertex {
            left: index / self.right_size,
            right: index % self.right_size,
        }
    }
}

fn product_size(a: usize, b: usize, guard: &Guard, what: &str) -> Result<usize> {
    let n = (a as u64).checked_mul(b as u64);
    guard.check(n, what)?;
    Ok(n.unwrap() as usize)
}

/// `G × H`: `(g,h) ~ (g',h')` iff `g ~ g'` in `G` and `h ~ h'` in `H`.
/// Loops count as edges `{x, x}`, so looped `g` and `h` give a looped `(g,h)`.
pub fn tensor_product(g: &Graph, h: &Graph, guard: &Guard) -> Result<Graph> {
    let n = product_size(g.n(), h.n(), guard, "tensor product")?;
    let layout = ProductLayout::new(g.n(), h.n());
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for (idx, row) in rows.iter_mut().enumerate() {
        let ProductVertex { left, right } = layout.vertex(idx);
        for g2 in g.neighbors(left) {
            for h2 in h.neighbors(right) {
                row.insert(layout.index(ProductVertex {
                    left: g2,
                    right: h2,
                }));
            }
        }
    }
    Graph::from_rows(rows)
}

/// `G ⊠ K_q`: `(u,i) ~ (v,j)` iff `u ~ v` in `G`, or `u = v` and `i ≠ j`.
pub fn strong_product_kq(g: &Graph, q: usize, guard: &Guard) -> Result<Graph> {
    if q == 0 {
        return Err(Error::input("clique size q must be at least 1"));
    }
    if g.has_loops() {
        return Err(Error::input(
            "strong product with K_q expects a loopless graph",
        ));
    }
    let n = product_size(g.n(), q, guard, "strong product")?;
    let layout = ProductLayout::new(g.n(), q);
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for (idx, row) in rows.iter_mut().enumerate() {
        let ProductVertex { left, right } = layout.vertex(idx);
        for v in g.neighbors(left) {
            row.insert_range(v * q..(v + 1) * q);
        }
        row.insert_range(left * q..(left + 1) * q);
        row.set(layout.index(ProductVertex { left, right }), false);
    }
    Graph::from_rows(rows)
}

/// Which factor of the product the input coloring belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Coloring of the left factor: the product is `G × H`, `(g,h) ↦ Ψ(g)`.
    Left,
    /// Coloring of the right factor: the product is `H × G`, `(h,g) ↦ Ψ(g)`.
    Right,
}

/// Lifts a proper coloring of `g` to the product of `g` with `h`.
pub fn lift_coloring(g: &Graph, psi: &Coloring, h: &Graph, side: Side) -> Result<Coloring> {
    if !is_proper(g, psi)? {
        return Err(Error::precondition(
            "lift_coloring needs a proper coloring of the factor",
        ));
    }
    let colors: Vec<u32> = match side {
        Side::Left => {
            let layout = ProductLayout::new(g.n(), h.n());
            (0..layout.len())
                .map(|i| psi.color(layout.vertex(i).left))
                .collect()
        }
        Side::Right => {
            let layout = ProductLayout::new(h.n(), g.n());
            (0..layout.len())
                .map(|i| psi.color(layout.vertex(i).right))
                .collect()
        }
    };
    Coloring::new(colors, psi.palette())
}
