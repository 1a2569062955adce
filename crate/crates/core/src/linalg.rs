//! Dense linear algebra over a prime field `F_p`, sized for degree-wise
//! problems (a few hundred coordinates at most).

use crate::binomial::inv_mod_p;

/// Echelon basis of a subspace of `F_p^dim`, remembering for every stored row
/// which combination of the inserted vectors produced it.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    dim: usize,
    inserted: usize,
    // (pivot column, row normalised so that row[pivot] == 1, combination)
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub residual: Vec<u32>,
    /// Coefficients on the inserted vectors such that
    /// `v = residual + sum_i combination[i] * inserted[i]`.
    pub combination: Vec<u32>,
}

impl Echelon {
    pub fn new(p: u32, dim: usize) -> Self {
        Echelon { p, dim, inserted: 0, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn reduce(&self, v: &[u32]) -> Reduction {
        assert_eq!(v.len(), self.dim);
        let p = u64::from(self.p);
        let mut residual: Vec<u32> = v.iter().map(|&x| x % self.p).collect();
        let mut combination = vec![0u32; self.inserted];
        for (pivot, row, combo) in &self.rows {
            let c = residual[*pivot];
            if c == 0 {
                continue;
            }
            let c64 = u64::from(c);
            for (r, &x) in residual.iter_mut().zip(row) {
                *r = ((u64::from(*r) + (p - u64::from(x)) * c64) % p) as u32;
            }
            for (k, &x) in combination.iter_mut().zip(combo) {
                *k = ((u64::from(*k) + u64::from(x) * c64) % p) as u32;
            }
        }
        Reduction { residual, combination }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).residual.iter().all(|&x| x == 0)
    }

    /// Inserts `v`. Returns `None` if it was independent, otherwise the
    /// dependency: coefficients `c` on the previously inserted vectors with
    /// `v = sum c_i inserted_i`.
    pub fn insert(&mut self, v: &[u32]) -> Option<Vec<u32>> {
        let Reduction { residual, mut combination } = self.reduce(v);
        self.inserted += 1;
        for (_, _, combo) in &mut self.rows {
            combo.push(0);
        }
        match residual.iter().position(|&x| x != 0) {
            None => Some(combination),
            Some(pivot) => {
                let p = u64::from(self.p);
                let inv = u64::from(inv_mod_p(residual[pivot], self.p));
                let row: Vec<u32> =
                    residual.iter().map(|&x| (u64::from(x) * inv % p) as u32).collect();
                // residual = v - sum combination_i inserted_i
                let mut combo: Vec<u32> = combination
                    .iter_mut()
                    .map(|c| ((p - u64::from(*c)) % p * inv % p) as u32)
                    .collect();
                combo.push(inv as u32);
                self.rows.push((pivot, row, combo));
                None
            }
        }
    }
}

/// Solves `sum_i c_i rows_i = target` over `F_p`, returning one solution.
pub fn solve_combination(p: u32, rows: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
    let mut ech = Echelon::new(p, target.len());
    for r in rows {
        ech.insert(r);
    }
    let red = ech.reduce(target);
    red.residual.iter().all(|&x| x == 0).then_some(red.combination)
}

/// A basis of the kernel of the map sending the `i`-th standard basis vector
/// to `images[i]`.
pub fn kernel_basis(p: u32, images: &[Vec<u32>], target_dim: usize) -> Vec<Vec<u32>> {
    let mut ech = Echelon::new(p, target_dim);
    let mut kernel = Vec::new();
    for (i, img) in images.iter().enumerate() {
        if let Some(dep) = ech.insert(img) {
            // img_i - sum dep_j img_j = 0
            let mut k = vec![0u32; images.len()];
            for (j, &c) in dep.iter().enumerate() {
                k[j] = (p - c) % p;
            }
            k[i] = 1;
            kernel.push(k);
        }
    }
    kernel
}
