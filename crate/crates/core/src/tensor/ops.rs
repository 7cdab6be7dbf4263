//! Contractions, index gymnastics and the operator toolkit.

use smallvec::SmallVec;

use super::{encode, Field, Index, Tensor, TensorError, Valence};

fn need(t: &Tensor<impl Field>, v: Valence) -> Result<(), TensorError> {
    if t.valence() != v {
        return Err(TensorError::ValenceMismatch { expected: v, found: t.valence() });
    }
    Ok(())
}

fn check_slot(t: &Tensor<impl Field>, s: usize) -> Result<(), TensorError> {
    if s >= t.rank() {
        return Err(TensorError::SlotRange { slot: s, valence: t.valence() });
    }
    Ok(())
}

/// Contract slots `a < b`. A contravariant slot pairs directly; two
/// covariant slots pair through `ginv`.
pub fn contract<F: Field>(t: &Tensor<F>, a: usize, b: usize, ginv: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    let (a, b) = (a.min(b), a.max(b));
    check_slot(t, b)?;
    if a == b {
        return Err(TensorError::SlotRange { slot: b, valence: t.valence() });
    }
    let n = t.dim();
    let v = t.valence();
    if v.contra == 1 && a == 0 {
        let out_v = Valence::new(0, v.co - 1);
        let mut full: Index = SmallVec::from_elem(0, t.rank());
        return Ok(Tensor::from_fn(n, out_v, |idx| {
            let mut k = 0;
            for s in 0..t.rank() {
                if s != a && s != b {
                    full[s] = idx[k];
                    k += 1;
                }
            }
            let terms: Vec<F> = (0..n)
                .map(|m| {
                    full[a] = m;
                    full[b] = m;
                    t.get(&full).clone()
                })
                .collect();
            F::sum(&terms).finish()
        }));
    }
    if a < v.contra {
        return Err(TensorError::ValenceMismatch { expected: Valence::new(0, v.co), found: v });
    }
    need(ginv, Valence::new(0, 2))?;
    let out_v = Valence::new(v.contra, v.co - 2);
    let mut full: Index = SmallVec::from_elem(0, t.rank());
    Ok(Tensor::from_fn(n, out_v, |idx| {
        let mut k = 0;
        for s in 0..t.rank() {
            if s != a && s != b {
                full[s] = idx[k];
                k += 1;
            }
        }
        let mut items: Vec<(F, F)> = Vec::new();
        for p in 0..n {
            for q in 0..n {
                let w = ginv.get(&[p, q]);
                if w.is_zero() {
                    continue;
                }
                full[a] = p;
                full[b] = q;
                let x = t.get(&full);
                if !x.is_zero() {
                    items.push((w.clone(), x.clone()));
                }
            }
        }
        let refs: Vec<(bool, &F, &F)> = items.iter().map(|(w, x)| (false, w, x)).collect();
        F::sum_of_products(&refs).finish()
    }))
}

/// Raise covariant `slot` of a `(0,k)` tensor; the raised slot becomes slot 0.
pub fn raise<F: Field>(t: &Tensor<F>, slot: usize, ginv: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    check_slot(t, slot)?;
    if t.valence().contra != 0 {
        return Err(TensorError::ValenceMismatch { expected: Valence::new(0, t.rank()), found: t.valence() });
    }
    let n = t.dim();
    let k = t.rank();
    let mut full: Index = SmallVec::from_elem(0, k);
    Ok(Tensor::from_fn(n, Valence::new(1, k - 1), |idx| {
        let m = idx[0];
        let mut j = 1;
        for s in 0..k {
            if s != slot {
                full[s] = idx[j];
                j += 1;
            }
        }
        let mut items: Vec<(&F, F)> = Vec::new();
        for l in 0..n {
            let w = ginv.get(&[m, l]);
            if w.is_zero() {
                continue;
            }
            full[slot] = l;
            let x = t.get(&full);
            if !x.is_zero() {
                items.push((w, x.clone()));
            }
        }
        let refs: Vec<(bool, &F, &F)> = items.iter().map(|(w, x)| (false, *w, x)).collect();
        F::sum_of_products(&refs).finish()
    }))
}

/// Lower the contravariant slot of a `(1,k-1)` tensor, inserting it at
/// covariant position `at`.
pub fn lower<F: Field>(t: &Tensor<F>, at: usize, g: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    let v = t.valence();
    if v.contra != 1 {
        return Err(TensorError::ValenceMismatch { expected: Valence::new(1, v.co), found: v });
    }
    if at > v.co {
        return Err(TensorError::SlotRange { slot: at, valence: v });
    }
    let n = t.dim();
    let k = t.rank();
    let mut src: Index = SmallVec::from_elem(0, k);
    Ok(Tensor::from_fn(n, Valence::new(0, k), |idx| {
        let l = idx[at];
        let mut j = 1;
        for (s, i) in idx.iter().enumerate() {
            if s != at {
                src[j] = *i;
                j += 1;
            }
        }
        let mut items: Vec<(&F, F)> = Vec::new();
        for m in 0..n {
            let w = g.get(&[l, m]);
            if w.is_zero() {
                continue;
            }
            src[0] = m;
            let x = t.get(&src);
            if !x.is_zero() {
                items.push((w, x.clone()));
            }
        }
        let refs: Vec<(bool, &F, &F)> = items.iter().map(|(w, x)| (false, *w, x)).collect();
        F::sum_of_products(&refs).finish()
    }))
}

/// Symmetric in the two slots of a `(0,2)` tensor.
pub fn is_symmetric2<F: Field>(a: &Tensor<F>, negligible: impl Fn(&F) -> bool) -> bool {
    let n = a.dim();
    (0..n).all(|i| (i + 1..n).all(|j| negligible(&a.get(&[i, j]).sub(a.get(&[j, i])).finish())))
}

/// General Kulkarni–Nomizu product `A ∧ H` for `(0,2)` A and `(0,k)` H,
/// slots `(X1, X2, Y1, Y2, Y3, ...)`.
pub fn kulkarni_nomizu_general<F: Field>(a: &Tensor<F>, h: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    need(a, Valence::new(0, 2))?;
    let k = h.rank();
    if h.valence().contra != 0 || k < 2 {
        return Err(TensorError::RankTooSmall(2));
    }
    let mut hi: Index = SmallVec::from_elem(0, k);
    Ok(Tensor::from_fn(h.dim(), Valence::new(0, k + 2), |idx| {
        let (x1, x2, y1, y2) = (idx[0], idx[1], idx[2], idx[3]);
        hi[2..].copy_from_slice(&idx[4..]);
        let mut vals: SmallVec<[(bool, F, F); 4]> = SmallVec::new();
        for (neg, ai, aj, hp, hq) in [
            (false, x1, y2, x2, y1),
            (false, x2, y1, x1, y2),
            (true, x1, y1, x2, y2),
            (true, x2, y2, x1, y1),
        ] {
            let av = a.get(&[ai, aj]);
            if av.is_zero() {
                continue;
            }
            hi[0] = hp;
            hi[1] = hq;
            let hv = h.get(&hi);
            if !hv.is_zero() {
                vals.push((neg, av.clone(), hv.clone()));
            }
        }
        let refs: SmallVec<[(bool, &F, &F); 4]> = vals.iter().map(|(s, x, y)| (*s, x, y)).collect();
        F::sum_of_products(&refs).finish()
    }))
}

/// Kulkarni–Nomizu product of two symmetric `(0,2)` tensors.
pub fn kulkarni_nomizu<F: Field>(a: &Tensor<F>, e: &Tensor<F>, negligible: impl Fn(&F) -> bool) -> Result<Tensor<F>, TensorError> {
    need(a, Valence::new(0, 2))?;
    need(e, Valence::new(0, 2))?;
    if !is_symmetric2(a, &negligible) || !is_symmetric2(e, &negligible) {
        return Err(TensorError::Asymmetric);
    }
    kulkarni_nomizu_general(a, e)
}

/// `(X ∧_H Y)(X1, ..., Xk)` stored with slots `(X, Y, X1, ..., Xk)`.
pub fn wedge_form<F: Field>(h: &Tensor<F>, g: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    let k = h.rank();
    if h.valence().contra != 0 || k < 2 {
        return Err(TensorError::RankTooSmall(2));
    }
    let mut hi: Index = SmallVec::from_elem(0, k);
    Ok(Tensor::from_fn(h.dim(), Valence::new(0, k + 2), |idx| {
        let (x, y, x1, x2) = (idx[0], idx[1], idx[2], idx[3]);
        hi[1] = x1;
        hi[2..].copy_from_slice(&idx[4..]);
        let mut vals: SmallVec<[(bool, F, F); 2]> = SmallVec::new();
        for (neg, first, other) in [(false, y, x), (true, x, y)] {
            let gv = g.get(&[other, x2]);
            if gv.is_zero() {
                continue;
            }
            hi[0] = first;
            let hv = h.get(&hi);
            if !hv.is_zero() {
                vals.push((neg, hv.clone(), gv.clone()));
            }
        }
        let refs: SmallVec<[(bool, &F, &F); 2]> = vals.iter().map(|(s, x, y)| (*s, x, y)).collect();
        F::sum_of_products(&refs).finish()
    }))
}

/// The endomorphism field `X ∧_A Y` as a `(1,3)` tensor `op^m_{abc}`.
pub fn wedge_endomorphism<F: Field>(a: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    need(a, Valence::new(0, 2))?;
    Ok(Tensor::from_fn(a.dim(), Valence::new(1, 3), |i| {
        let (m, x, y, c) = (i[0], i[1], i[2], i[3]);
        match (m == x, m == y) {
            (true, true) => a.get(&[y, c]).sub(a.get(&[x, c])).finish(),
            (true, false) => a.get(&[y, c]).clone(),
            (false, true) => a.get(&[x, c]).neg(),
            (false, false) => F::zero(),
        }
    }))
}

/// The curvature operator of a `(0,4)` tensor as `(1,3)`: `g^{mk} D_{abck}`.
pub fn curvature_operator<F: Field>(d: &Tensor<F>, ginv: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    need(d, Valence::new(0, 4))?;
    raise(d, 3, ginv)
}

type OpEntry<'a, F> = (usize, usize, usize, &'a F);

/// Derivation action of an endomorphism-valued 2-form `op^m_{abc}` on `h`,
/// with the operator pair appended as the last two covariant slots.
pub fn act<F: Field>(op: &Tensor<F>, h: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    need(op, Valence::new(1, 3))?;
    let hv = h.valence();
    if hv.contra > 1 || hv.rank() == 0 {
        return Err(TensorError::ValenceMismatch { expected: Valence::new(0, 1), found: hv });
    }
    let n = h.dim();
    let mut by_upper: Vec<Vec<OpEntry<F>>> = vec![Vec::new(); n];
    let mut by_lower: Vec<Vec<OpEntry<F>>> = vec![Vec::new(); n];
    for (i, v) in op.nonzero() {
        by_upper[i[0]].push((i[1], i[2], i[3], v));
        by_lower[i[3]].push((i[0], i[1], i[2], v));
    }
    let rank = hv.rank();
    let out_v = Valence::new(hv.contra, hv.co + 2);
    let out_len = n.pow(out_v.rank() as u32);
    let mut buckets: Vec<SmallVec<[(bool, &F, &F); 4]>> = vec![SmallVec::new(); out_len];
    let strides: Vec<usize> = (0..rank).map(|s| n.pow((rank - 1 - s) as u32)).collect();
    let nn = n * n;
    for (j_idx, x) in h.nonzero() {
        let base = encode(&j_idx, n);
        for s in hv.contra..rank {
            let m = j_idx[s];
            for &(a, b, c, v) in &by_upper[m] {
                let lin = base - m * strides[s] + c * strides[s];
                buckets[lin * nn + a * n + b].push((true, v, x));
            }
        }
        if hv.contra == 1 {
            let m = j_idx[0];
            for &(s_up, a, b, v) in &by_lower[m] {
                let lin = base - m * strides[0] + s_up * strides[0];
                buckets[lin * nn + a * n + b].push((false, v, x));
            }
        }
    }
    let data = buckets.iter().map(|b| if b.is_empty() { F::zero() } else { F::sum_of_products(b).finish() }).collect();
    Ok(Tensor::from_data(n, out_v, data))
}

/// `D · H` for a `(0,4)` tensor D.
pub fn curvature_action<F: Field>(d: &Tensor<F>, h: &Tensor<F>, ginv: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    act(&curvature_operator(d, ginv)?, h)
}

/// Tachibana tensor `Q(A, H)`.
pub fn tachibana<F: Field>(a: &Tensor<F>, h: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    act(&wedge_endomorphism(a)?, h)
}

/// `A²_{ij} = A_{ik} g^{kl} A_{lj}`.
pub fn squared<F: Field>(a: &Tensor<F>, ginv: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    need(a, Valence::new(0, 2))?;
    let n = a.dim();
    Ok(Tensor::from_fn(n, Valence::new(0, 2), |i| {
        let mut items: Vec<(F, &F)> = Vec::new();
        for k in 0..n {
            let x = a.get(&[i[0], k]);
            if x.is_zero() {
                continue;
            }
            for l in 0..n {
                let w = ginv.get(&[k, l]);
                let y = a.get(&[l, i[1]]);
                if !w.is_zero() && !y.is_zero() {
                    items.push((x.mul(w), y));
                }
            }
        }
        let refs: Vec<(bool, &F, &F)> = items.iter().map(|(p, y)| (false, p, *y)).collect();
        F::sum_of_products(&refs).finish()
    }))
}

/// `T(1..6) + T(3,4,5,6,1,2) + T(5,6,1,2,3,4)` for a `(0,6)` tensor.
pub fn walker_sum<F: Field>(t: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    need(t, Valence::new(0, 6))?;
    let b = t.permute(&[2, 3, 4, 5, 0, 1]);
    let c = t.permute(&[4, 5, 0, 1, 2, 3]);
    Ok(Tensor::from_fn(t.dim(), t.valence(), |i| {
        let lin = encode(i, t.dim());
        F::sum(&[t.at(lin).clone(), b.at(lin).clone(), c.at(lin).clone()]).finish()
    }))
}

/// Residuals of the generalized-curvature-tensor axioms.
#[derive(Clone, Debug)]
pub struct GctResiduals<F> {
    /// `D(1,2,3,4) + D(2,1,3,4)`
    pub skew12: Tensor<F>,
    /// `D(1,2,3,4) + D(2,3,1,4) + D(3,1,2,4)`
    pub first_bianchi: Tensor<F>,
    /// `D(1,2,3,4) - D(3,4,1,2)`
    pub pair_symmetry: Tensor<F>,
}

pub fn gct_residuals<F: Field>(d: &Tensor<F>) -> Result<GctResiduals<F>, TensorError> {
    need(d, Valence::new(0, 4))?;
    let n = d.dim();
    let v = d.valence();
    let skew12 = Tensor::from_fn(n, v, |i| d.get(i).add(d.get(&[i[1], i[0], i[2], i[3]])).finish());
    let first_bianchi = Tensor::from_fn(n, v, |i| {
        F::sum(&[d.get(i).clone(), d.get(&[i[1], i[2], i[0], i[3]]).clone(), d.get(&[i[2], i[0], i[1], i[3]]).clone()]).finish()
    });
    let pair_symmetry = Tensor::from_fn(n, v, |i| d.get(i).sub(d.get(&[i[2], i[3], i[0], i[1]])).finish());
    Ok(GctResiduals { skew12, first_bianchi, pair_symmetry })
}

/// Outer product `A ⊗ B` with covariant slots concatenated.
pub fn outer<F: Field>(a: &Tensor<F>, b: &Tensor<F>) -> Result<Tensor<F>, TensorError> {
    if a.valence().contra != 0 || b.valence().contra != 0 {
        return Err(TensorError::ValenceMismatch { expected: Valence::new(0, a.rank()), found: a.valence() });
    }
    let n = a.dim().max(b.dim());
    let ra = a.rank();
    Ok(Tensor::from_fn(n, Valence::new(0, ra + b.rank()), |i| {
        let x = a.get(&i[..ra]);
        if x.is_zero() {
            return F::zero();
        }
        x.mul(b.get(&i[ra..])).finish()
    }))
}

