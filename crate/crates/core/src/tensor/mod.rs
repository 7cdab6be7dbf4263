//! Dense tensors with valence, generic over the scalar backend.
//!
//! Storage is row-major with slot 0 most significant. A contravariant slot,
//! when present, is always slot 0.

mod field;
mod ops;

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

pub use field::{Approx, Field};
pub use ops::*;

pub type Index = SmallVec<[usize; 8]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Valence {
    pub contra: usize,
    pub co: usize,
}

impl Valence {
    pub const fn new(contra: usize, co: usize) -> Valence {
        Valence { contra, co }
    }

    pub fn rank(&self) -> usize {
        self.contra + self.co
    }
}

impl fmt::Display for Valence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.contra, self.co)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("valence mismatch: expected {expected}, found {found}")]
    ValenceMismatch { expected: Valence, found: Valence },
    #[error("slot {slot} out of range for valence {valence}")]
    SlotRange { slot: usize, valence: Valence },
    #[error("input tensor is not symmetric")]
    Asymmetric,
    #[error("operation needs at least {0} covariant slots")]
    RankTooSmall(usize),
}

#[derive(Clone, Debug)]
pub struct Tensor<F> {
    dim: usize,
    valence: Valence,
    data: Vec<F>,
}

/// Decode a linear offset into a multi-index.
pub fn decode(mut lin: usize, dim: usize, rank: usize) -> Index {
    let mut idx: Index = SmallVec::from_elem(0, rank);
    for s in (0..rank).rev() {
        idx[s] = lin % dim;
        lin /= dim;
    }
    idx
}

pub fn encode(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, i| acc * dim + i)
}

impl<F: Field> Tensor<F> {
    pub fn zeros(dim: usize, valence: Valence) -> Tensor<F> {
        let len = dim.pow(valence.rank() as u32);
        Tensor { dim, valence, data: vec![F::zero(); len] }
    }

    pub fn from_fn(dim: usize, valence: Valence, mut f: impl FnMut(&[usize]) -> F) -> Tensor<F> {
        let rank = valence.rank();
        let len = dim.pow(rank as u32);
        let data = (0..len).map(|lin| f(&decode(lin, dim, rank))).collect();
        Tensor { dim, valence, data }
    }

    pub fn from_data(dim: usize, valence: Valence, data: Vec<F>) -> Tensor<F> {
        assert_eq!(data.len(), dim.pow(valence.rank() as u32));
        Tensor { dim, valence, data }
    }

    pub fn scalar(x: F) -> Tensor<F> {
        Tensor { dim: 1, valence: Valence::new(0, 0), data: vec![x] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn rank(&self) -> usize {
        self.valence.rank()
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> &F {
        &self.data[encode(idx, self.dim)]
    }

    pub fn at(&self, lin: usize) -> &F {
        &self.data[lin]
    }

    pub fn index_of(&self, lin: usize) -> Index {
        decode(lin, self.dim, self.rank())
    }

    pub fn as_scalar(&self) -> &F {
        assert_eq!(self.rank(), 0);
        &self.data[0]
    }

    /// Nonzero components with their multi-indices, in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Index, &F)> {
        let (dim, rank) = (self.dim, self.rank());
        self.data.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(i, x)| (decode(i, dim, rank), x))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Tensor<G> {
        Tensor { dim: self.dim, valence: self.valence, data: self.data.iter().map(f).collect() }
    }

    pub fn finish(self) -> Tensor<F> {
        Tensor { dim: self.dim, valence: self.valence, data: self.data.into_iter().map(F::finish).collect() }
    }

    fn same_shape(&self, o: &Tensor<F>) -> Result<(), TensorError> {
        if self.valence != o.valence || self.dim != o.dim {
            return Err(TensorError::ValenceMismatch { expected: self.valence, found: o.valence });
        }
        Ok(())
    }

    pub fn add(&self, o: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
        self.same_shape(o)?;
        Ok(Tensor { dim: self.dim, valence: self.valence, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, o: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
        self.same_shape(o)?;
        Ok(Tensor { dim: self.dim, valence: self.valence, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() })
    }

    /// `sum_i c_i T_i` over tensors of equal shape.
    pub fn linear(parts: &[(F, &Tensor<F>)]) -> Result<Tensor<F>, TensorError> {
        let first = parts.first().expect("empty linear combination").1;
        for (_, t) in parts {
            first.same_shape(t)?;
        }
        let data = (0..first.len())
            .map(|i| {
                let items: SmallVec<[(bool, &F, &F); 6]> = parts.iter().map(|(c, t)| (false, c, &t.data[i])).collect();
                F::sum_of_products(&items).finish()
            })
            .collect();
        Ok(Tensor { dim: first.dim, valence: first.valence, data })
    }

    pub fn scale(&self, s: &F) -> Tensor<F> {
        self.map(|x| if x.is_zero() { F::zero() } else { x.mul(s) })
    }

    pub fn neg(&self) -> Tensor<F> {
        self.map(|x| x.neg())
    }

    /// `out(i_0, ..., i_{r-1}) = self(i_{perm[0]}, ..., i_{perm[r-1]})`.
    pub fn permute(&self, perm: &[usize]) -> Tensor<F> {
        assert_eq!(perm.len(), self.rank());
        let mut src: Index = SmallVec::from_elem(0, perm.len());
        Tensor::from_fn(self.dim, self.valence, |idx| {
            for (s, p) in perm.iter().enumerate() {
                src[s] = idx[*p];
            }
            self.get(&src).clone()
        })
    }
}
