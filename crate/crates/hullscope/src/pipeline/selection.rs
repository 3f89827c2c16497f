//! Dimension-selection strategies for image data: a growing central patch,
//! or box-average smoothing onto a coarse grid. Both enumerate their outputs
//! row-major with channels innermost and keep the first `target_dim` values,
//! so selections at the same grid side are prefix-nested.

use crate::error::{HullscopeError, Result};
use crate::point_set::PointSet;
use ndarray::{ArrayView3, ArrayView4};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SelectionStrategy {
    CentralPatch,
    SmoothSubsample,
}

impl fmt::Display for SelectionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionStrategy::CentralPatch => write!(f, "central-patch"),
            SelectionStrategy::SmoothSubsample => write!(f, "smooth-subsample"),
        }
    }
}

impl FromStr for SelectionStrategy {
    type Err = HullscopeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central-patch" | "central_patch" | "patch" => Ok(SelectionStrategy::CentralPatch),
            "smooth-subsample" | "smooth_subsample" | "smooth" => {
                Ok(SelectionStrategy::SmoothSubsample)
            }
            other => Err(HullscopeError::input(format!(
                "unknown strategy `{other}` (use central-patch or smooth-subsample)"
            ))),
        }
    }
}

/// One pooling window: pixel rows [r0, r1) × cols [c0, c1) of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PoolCell {
    pub r0: usize,
    pub r1: usize,
    pub c0: usize,
    pub c1: usize,
    pub channel: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Plan {
    /// Flat pixel indices (h·W + w)·C + c.
    Indices(Vec<usize>),
    Pools(Vec<PoolCell>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimSelection {
    pub strategy: SelectionStrategy,
    pub target_dim: usize,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    /// Grid side s: the smallest s with s²·C ≥ target_dim.
    pub side: usize,
    plan: Plan,
}

fn grid_side(target_dim: usize, channels: usize) -> usize {
    let per_channel = target_dim.div_ceil(channels);
    let mut s = (per_channel as f64).sqrt().ceil() as usize;
    while s * s < per_channel {
        s += 1;
    }
    while s > 1 && (s - 1) * (s - 1) >= per_channel {
        s -= 1;
    }
    s
}

pub fn make_selection(
    strategy: SelectionStrategy,
    target_dim: usize,
    height: usize,
    width: usize,
    channels: usize,
) -> Result<DimSelection> {
    if height == 0 || width == 0 || channels == 0 {
        return Err(HullscopeError::input("image shape must be nonzero"));
    }
    if target_dim == 0 || target_dim > height * width * channels {
        return Err(HullscopeError::domain(format!(
            "target_dim {target_dim} outside 1..={}",
            height * width * channels
        )));
    }
    let s = grid_side(target_dim, channels);
    let plan = match strategy {
        SelectionStrategy::CentralPatch => {
            if s > height.min(width) {
                return Err(HullscopeError::domain(format!(
                    "central patch side {s} exceeds the {height}x{width} image"
                )));
            }
            let r_top = (height - s) / 2;
            let c_left = (width - s) / 2;
            let mut idx = Vec::with_capacity(target_dim);
            'outer: for r in r_top..r_top + s {
                for c in c_left..c_left + s {
                    for ch in 0..channels {
                        idx.push((r * width + c) * channels + ch);
                        if idx.len() == target_dim {
                            break 'outer;
                        }
                    }
                }
            }
            Plan::Indices(idx)
        }
        SelectionStrategy::SmoothSubsample => {
            let wh = height.div_ceil(s);
            let ww = width.div_ceil(s);
            let mut cells = Vec::with_capacity(target_dim);
            'outer: for i in 0..s {
                for j in 0..s {
                    let (r0, c0) = (i * wh, j * ww);
                    if r0 >= height || c0 >= width {
                        // truncated away entirely; contributes nothing
                        continue;
                    }
                    for ch in 0..channels {
                        cells.push(PoolCell {
                            r0,
                            r1: (r0 + wh).min(height),
                            c0,
                            c1: (c0 + ww).min(width),
                            channel: ch,
                        });
                        if cells.len() == target_dim {
                            break 'outer;
                        }
                    }
                }
            }
            if cells.len() < target_dim {
                return Err(HullscopeError::domain(format!(
                    "smoothing grid of side {s} covers only {} windows on a {height}x{width} \
                     image; target_dim {target_dim} is unreachable at this grid size",
                    cells.len()
                )));
            }
            Plan::Pools(cells)
        }
    };
    Ok(DimSelection {
        strategy,
        target_dim,
        height,
        width,
        channels,
        side: s,
        plan,
    })
}

impl DimSelection {
    /// Flat pixel indices, central-patch plans only.
    pub fn index_map(&self) -> Option<&[usize]> {
        match &self.plan {
            Plan::Indices(v) => Some(v),
            Plan::Pools(_) => None,
        }
    }

    pub fn pooling_plan(&self) -> Option<&[PoolCell]> {
        match &self.plan {
            Plan::Pools(v) => Some(v),
            Plan::Indices(_) => None,
        }
    }

    /// Selected values of one image, bytes scaled to [0, 1] by /255.
    pub fn apply(&self, image: ArrayView3<u8>) -> Result<Vec<f64>> {
        if image.dim() != (self.height, self.width, self.channels) {
            return Err(HullscopeError::dim(format!(
                "selection built for {}x{}x{}, image is {:?}",
                self.height, self.width, self.channels,
                image.dim()
            )));
        }
        let out = match &self.plan {
            Plan::Indices(idx) => idx
                .iter()
                .map(|&flat| {
                    let ch = flat % self.channels;
                    let pix = flat / self.channels;
                    image[[pix / self.width, pix % self.width, ch]] as f64 / 255.0
                })
                .collect(),
            Plan::Pools(cells) => cells
                .iter()
                .map(|cell| {
                    let mut sum = 0.0;
                    for r in cell.r0..cell.r1 {
                        for c in cell.c0..cell.c1 {
                            sum += image[[r, c, cell.channel]] as f64;
                        }
                    }
                    let count = (cell.r1 - cell.r0) * (cell.c1 - cell.c0);
                    sum / (255.0 * count as f64)
                })
                .collect(),
        };
        Ok(out)
    }

    /// Apply to the listed rows of an N×H×W×C stack.
    pub fn apply_batch(&self, images: ArrayView4<u8>, rows: &[usize]) -> Result<PointSet> {
        if rows.is_empty() {
            return Err(HullscopeError::input("row subset must be nonempty"));
        }
        let n = images.dim().0;
        let mut flat = Vec::with_capacity(rows.len() * self.target_dim);
        for &r in rows {
            if r >= n {
                return Err(HullscopeError::input(format!(
                    "row {r} out of range for {n} images"
                )));
            }
            flat.extend(self.apply(images.index_axis(ndarray::Axis(0), r))?);
        }
        PointSet::from_rows(rows.len(), self.target_dim, flat)
    }

    pub fn describe(&self) -> String {
        format!(
            "{}:target={},side={},image={}x{}x{}",
            self.strategy, self.target_dim, self.side, self.height, self.width, self.channels
        )
    }
}
