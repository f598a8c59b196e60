//! Dense boolean grids over boxes of lattice points.
//!
//! Many monomial computations on zero-dimensional ideals only ever touch a
//! bounded box of exponents. Scanning that box with a flat array is far
//! cheaper than pairwise divisibility tests once ideals get large.

/// Largest box (in cells) that grid-based routines will allocate.
pub(crate) const GRID_LIMIT: usize = 1 << 26;

/// The box `prod [0, dims[i])` with row-major strides (last coordinate
/// fastest). Moving to `p - e_i` always lowers the flat index.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    /// `None` when the box is empty or exceeds [`GRID_LIMIT`].
    pub(crate) fn new(dims: &[u64]) -> Option<Grid> {
        let mut len: usize = 1;
        for d in dims {
            let d = usize::try_from(*d).ok()?;
            len = len.checked_mul(d)?;
        }
        if len == 0 || len > GRID_LIMIT {
            return None;
        }
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1] as usize;
        }
        Some(Grid {
            dims: dims.iter().map(|d| *d as usize).collect(),
            strides,
            len,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Flat index of `p`, or `None` when `p` lies outside the box.
    pub(crate) fn index(&self, p: &[u64]) -> Option<usize> {
        let mut idx = 0;
        for ((c, d), s) in p.iter().zip(&self.dims).zip(&self.strides) {
            let c = *c as usize;
            if c >= *d {
                return None;
            }
            idx += c * s;
        }
        Some(idx)
    }

    pub(crate) fn point(&self, mut idx: usize) -> Vec<u64> {
        let mut p = vec![0; self.dims.len()];
        for (c, s) in p.iter_mut().zip(&self.strides) {
            *c = (idx / s) as u64;
            idx %= s;
        }
        p
    }

    /// Closes `cells` upward: afterwards a cell is set iff some cell below
    /// it (componentwise) was set.
    pub(crate) fn close_upward(&self, cells: &mut [bool]) {
        let mut coords = vec![0usize; self.dims.len()];
        for idx in 0..self.len {
            if !cells[idx] {
                for (i, c) in coords.iter().enumerate() {
                    if *c > 0 && cells[idx - self.strides[i]] {
                        cells[idx] = true;
                        break;
                    }
                }
            }
            self.advance(&mut coords);
        }
    }

    /// Closes `cells` downward: afterwards a cell is set iff some cell above
    /// it (inside the box) was set.
    pub(crate) fn close_downward(&self, cells: &mut [bool]) {
        let mut coords: Vec<usize> = self.dims.iter().map(|d| d - 1).collect();
        for idx in (0..self.len).rev() {
            if !cells[idx] {
                for (i, c) in coords.iter().enumerate() {
                    if *c + 1 < self.dims[i] && cells[idx + self.strides[i]] {
                        cells[idx] = true;
                        break;
                    }
                }
            }
            self.retreat(&mut coords);
        }
    }

    /// Cells that are set while every lower neighbour is unset: the
    /// minimal elements of an up-closed set.
    pub(crate) fn minimal_cells(&self, cells: &[bool]) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let mut coords = vec![0usize; self.dims.len()];
        for idx in 0..self.len {
            if cells[idx]
                && coords
                    .iter()
                    .enumerate()
                    .all(|(i, c)| *c == 0 || !cells[idx - self.strides[i]])
            {
                out.push(coords.iter().map(|c| *c as u64).collect());
            }
            self.advance(&mut coords);
        }
        out
    }

    fn advance(&self, coords: &mut [usize]) {
        for i in (0..coords.len()).rev() {
            coords[i] += 1;
            if coords[i] < self.dims[i] {
                return;
            }
            coords[i] = 0;
        }
    }

    fn retreat(&self, coords: &mut [usize]) {
        for i in (0..coords.len()).rev() {
            if coords[i] > 0 {
                coords[i] -= 1;
                return;
            }
            coords[i] = self.dims[i] - 1;
        }
    }
}
