//! Frontier-cell rewards from voxel occupancy grids.
//!
//! A frontier cell is a Free voxel with at least one Unknown voxel among
//! its six face neighbors. Deployment value at a point along the carrier
//! path is the number of frontier cells that are vertically inaccessible
//! from the carrier (strictly above `robot_z + 1.0` m or strictly below
//! `robot_z - 0.1` m) and within a sensing radius of the point.
//!
//! Grid file format, plain text (states `?` Unknown, `.` Free, `#`
//! Occupied, x-fastest):
//!
//! ```text
//! VGRID1 <res> <ox> <oy> <oz> <nx> <ny> <nz>
//! <nz blocks of ny lines of nx state characters>
//! ```

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::distributions::{DistError, EmpiricalPrior};

/// Frontier cells below this offset above the carrier are reachable by it.
pub const INACCESSIBLE_ABOVE: f64 = 1.0;
/// Frontier cells above this offset below the carrier are reachable by it.
pub const INACCESSIBLE_BELOW: f64 = 0.1;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    Unknown,
    Free,
    Occupied,
}

impl CellState {
    fn to_char(self) -> char {
        match self {
            CellState::Unknown => '?',
            CellState::Free => '.',
            CellState::Occupied => '#',
        }
    }

    fn from_char(c: char) -> Option<CellState> {
        match c {
            '?' => Some(CellState::Unknown),
            '.' => Some(CellState::Free),
            '#' => Some(CellState::Occupied),
            _ => None,
        }
    }
}

/// Dense occupancy grid, cells stored x-fastest. Immutable once loaded.
#[derive(Clone, Debug)]
pub struct VoxelGrid {
    resolution: f64,
    origin: [f64; 3],
    dims: [usize; 3],
    cells: Vec<CellState>,
}

impl VoxelGrid {
    pub fn filled(
        resolution: f64,
        origin: [f64; 3],
        dims: [usize; 3],
        fill: CellState,
    ) -> Result<Self, GridError> {
        if !resolution.is_finite() || resolution <= 0.0 {
            return Err(GridError::Invalid(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        if dims.contains(&0) {
            return Err(GridError::Invalid(format!("dims must be positive, got {dims:?}")));
        }
        let len = dims[0]
            .checked_mul(dims[1])
            .and_then(|v| v.checked_mul(dims[2]))
            .ok_or_else(|| GridError::Invalid("grid too large".into()))?;
        Ok(VoxelGrid {
            resolution,
            origin,
            dims,
            cells: vec![fill; len],
        })
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn state(&self, x: usize, y: usize, z: usize) -> CellState {
        self.cells[self.index(x, y, z)]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, state: CellState) {
        let i = self.index(x, y, z);
        self.cells[i] = state;
    }

    /// World-frame center of a cell.
    pub fn center(&self, cell: [usize; 3]) -> [f64; 3] {
        [
            self.origin[0] + (cell[0] as f64 + 0.5) * self.resolution,
            self.origin[1] + (cell[1] as f64 + 0.5) * self.resolution,
            self.origin[2] + (cell[2] as f64 + 0.5) * self.resolution,
        ]
    }

    /// Out-of-bounds neighbors count as non-Unknown.
    fn neighbor_is_unknown(&self, x: isize, y: isize, z: isize) -> bool {
        if x < 0 || y < 0 || z < 0 {
            return false;
        }
        let (x, y, z) = (x as usize, y as usize, z as usize);
        if x >= self.dims[0] || y >= self.dims[1] || z >= self.dims[2] {
            return false;
        }
        self.state(x, y, z) == CellState::Unknown
    }

    pub fn parse(text: &str) -> Result<Self, GridError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| GridError::Parse {
                line: 1,
                msg: "empty grid file".into(),
            })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 8 || fields[0] != "VGRID1" {
            return Err(GridError::Parse {
                line: line_no,
                msg: format!(
                    "expected header 'VGRID1 res ox oy oz nx ny nz', got '{header}'"
                ),
            });
        }
        let num = |idx: usize| -> Result<f64, GridError> {
            fields[idx].parse().map_err(|e| GridError::Parse {
                line: line_no,
                msg: format!("bad header field '{}': {e}", fields[idx]),
            })
        };
        let resolution = num(1)?;
        let origin = [num(2)?, num(3)?, num(4)?];
        let dim = |idx: usize| -> Result<usize, GridError> {
            fields[idx].parse().map_err(|e| GridError::Parse {
                line: line_no,
                msg: format!("bad header field '{}': {e}", fields[idx]),
            })
        };
        let dims = [dim(5)?, dim(6)?, dim(7)?];
        let mut grid = VoxelGrid::filled(resolution, origin, dims, CellState::Unknown)
            .map_err(|e| GridError::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;

        for z in 0..dims[2] {
            for y in 0..dims[1] {
                let (line_no, row) = lines.next().ok_or_else(|| GridError::Parse {
                    line: text.lines().count(),
                    msg: format!("missing row y={y} of block z={z}"),
                })?;
                let row = row.trim_end();
                if row.chars().count() != dims[0] {
                    return Err(GridError::Parse {
                        line: line_no,
                        msg: format!(
                            "expected {} state characters, got {}",
                            dims[0],
                            row.chars().count()
                        ),
                    });
                }
                for (x, c) in row.chars().enumerate() {
                    let state = CellState::from_char(c).ok_or_else(|| GridError::Parse {
                        line: line_no,
                        msg: format!("unknown state character '{c}'"),
                    })?;
                    grid.set(x, y, z, state);
                }
            }
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(GridError::Parse {
                line: line_no,
                msg: "trailing rows beyond declared dimensions".into(),
            });
        }
        Ok(grid)
    }

    pub fn to_text(&self) -> String {
        let [nx, ny, nz] = self.dims;
        let mut out = format!(
            "VGRID1 {} {} {} {} {nx} {ny} {nz}\n",
            self.resolution, self.origin[0], self.origin[1], self.origin[2]
        );
        for z in 0..nz {
            for y in 0..ny {
                for x in 0..nx {
                    out.push(self.state(x, y, z).to_char());
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self, GridError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), GridError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Ordered carrier path in world coordinates (meters).
#[derive(Clone, Debug, PartialEq)]
pub struct PathTrace {
    poses: Vec<[f64; 3]>,
}

impl PathTrace {
    pub fn new(poses: Vec<[f64; 3]>) -> Result<Self, GridError> {
        if poses.is_empty() {
            return Err(GridError::Invalid("path must contain at least one pose".into()));
        }
        if poses.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(GridError::Invalid("path poses must be finite".into()));
        }
        Ok(PathTrace { poses })
    }

    pub fn poses(&self) -> &[[f64; 3]] {
        &self.poses
    }

    /// CSV `x,y,z` with a header row.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, GridError> {
        let mut poses = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| GridError::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if idx == 0 {
                if trimmed != "x,y,z" {
                    return Err(GridError::Parse {
                        line: 1,
                        msg: format!("expected header 'x,y,z', got '{trimmed}'"),
                    });
                }
                continue;
            }
            let parts: Vec<&str> = trimmed.split(',').collect();
            if parts.len() != 3 {
                return Err(GridError::Parse {
                    line: idx + 1,
                    msg: "expected three comma-separated fields".into(),
                });
            }
            let mut pose = [0.0; 3];
            for (k, raw) in parts.iter().enumerate() {
                pose[k] = raw.trim().parse().map_err(|e| GridError::Parse {
                    line: idx + 1,
                    msg: format!("bad coordinate '{raw}': {e}"),
                })?;
            }
            poses.push(pose);
        }
        PathTrace::new(poses)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,y,z")?;
        for p in &self.poses {
            writeln!(w, "{},{},{}", p[0], p[1], p[2])?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, GridError> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(BufReader::new(file))
    }
}

/// Reward-bearing decision point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecisionPoint {
    pub pose: [f64; 3],
    pub reward: u64,
}

/// Decision points in path order with their frontier-count rewards.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardSequence {
    points: Vec<DecisionPoint>,
}

impl RewardSequence {
    pub fn points(&self) -> &[DecisionPoint] {
        &self.points
    }

    pub fn rewards(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.reward as f64).collect()
    }

    /// CSV `index,x,y,z,reward`, 1-based indices.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,x,y,z,reward")?;
        for (i, p) in self.points.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                i + 1,
                p.pose[0],
                p.pose[1],
                p.pose[2],
                p.reward
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, GridError> {
        let mut points = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| GridError::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if idx == 0 {
                if trimmed != "index,x,y,z,reward" {
                    return Err(GridError::Parse {
                        line: 1,
                        msg: format!("expected header 'index,x,y,z,reward', got '{trimmed}'"),
                    });
                }
                continue;
            }
            let parts: Vec<&str> = trimmed.split(',').collect();
            if parts.len() != 5 {
                return Err(GridError::Parse {
                    line: idx + 1,
                    msg: "expected five comma-separated fields".into(),
                });
            }
            let coord = |k: usize| -> Result<f64, GridError> {
                parts[k].trim().parse().map_err(|e| GridError::Parse {
                    line: idx + 1,
                    msg: format!("bad field '{}': {e}", parts[k]),
                })
            };
            let reward: u64 = parts[4].trim().parse().map_err(|e| GridError::Parse {
                line: idx + 1,
                msg: format!("bad reward '{}': {e}", parts[4]),
            })?;
            points.push(DecisionPoint {
                pose: [coord(1)?, coord(2)?, coord(3)?],
                reward,
            });
        }
        if points.is_empty() {
            return Err(GridError::Invalid("reward csv contains no decision points".into()));
        }
        Ok(RewardSequence { points })
    }

    pub fn load(path: &Path) -> Result<Self, GridError> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(BufReader::new(file))
    }
}

/// All Free cells with at least one Unknown face neighbor (6-connectivity).
/// Membership of a cell depends only on its own 6-neighborhood.
pub fn detect_frontiers(grid: &VoxelGrid) -> BTreeSet<[usize; 3]> {
    let [nx, ny, nz] = grid.dims();
    let mut out = BTreeSet::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                if grid.state(x, y, z) != CellState::Free {
                    continue;
                }
                let (xi, yi, zi) = (x as isize, y as isize, z as isize);
                let unknown_neighbor = grid.neighbor_is_unknown(xi - 1, yi, zi)
                    || grid.neighbor_is_unknown(xi + 1, yi, zi)
                    || grid.neighbor_is_unknown(xi, yi - 1, zi)
                    || grid.neighbor_is_unknown(xi, yi + 1, zi)
                    || grid.neighbor_is_unknown(xi, yi, zi - 1)
                    || grid.neighbor_is_unknown(xi, yi, zi + 1);
                if unknown_neighbor {
                    out.insert([x, y, z]);
                }
            }
        }
    }
    out
}

/// Keep only the frontier cells a ground carrier at height `robot_z` cannot
/// reach: center strictly above `robot_z + 1.0` or strictly below
/// `robot_z - 0.1`.
pub fn filter_vertical(
    frontiers: &BTreeSet<[usize; 3]>,
    robot_z: f64,
    grid: &VoxelGrid,
) -> BTreeSet<[usize; 3]> {
    frontiers
        .iter()
        .filter(|&&cell| {
            let z = grid.center(cell)[2];
            z > robot_z + INACCESSIBLE_ABOVE || z < robot_z - INACCESSIBLE_BELOW
        })
        .copied()
        .collect()
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

/// Resample the path by arc length every `spacing` meters (first pose
/// included) and count vertically inaccessible frontier cells within
/// `radius` of each decision point.
pub fn rewards_along_path(
    grid: &VoxelGrid,
    path: &PathTrace,
    spacing: f64,
    radius: f64,
) -> Result<RewardSequence, GridError> {
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(GridError::Invalid(format!("spacing must be positive, got {spacing}")));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(GridError::Invalid(format!("radius must be positive, got {radius}")));
    }

    let poses = path.poses();
    // Cumulative arc length per pose.
    let mut arc = Vec::with_capacity(poses.len());
    let mut total = 0.0;
    arc.push(0.0);
    for pair in poses.windows(2) {
        total += dist2(pair[0], pair[1]).sqrt();
        arc.push(total);
    }

    let n_points = (total / spacing + 1e-9).floor() as usize + 1;
    let frontiers = detect_frontiers(grid);
    let centers: Vec<[f64; 3]> = frontiers.iter().map(|&c| grid.center(c)).collect();
    let zs: Vec<f64> = centers.iter().map(|c| c[2]).collect();

    let r2 = radius * radius;
    let mut points = Vec::with_capacity(n_points);
    let mut seg = 0usize;
    for k in 0..n_points {
        let s = k as f64 * spacing;
        // Advance to the segment containing arc position s.
        while seg + 1 < arc.len() - 1 && arc[seg + 1] < s {
            seg += 1;
        }
        let pose = if poses.len() == 1 {
            poses[0]
        } else {
            let seg_len = arc[seg + 1] - arc[seg];
            let p0 = poses[seg];
            let p1 = poses[seg + 1];
            if seg_len == 0.0 {
                p0
            } else {
                // Walk along the unit direction so exact-grid inputs stay
                // exact.
                let t = (s - arc[seg]).min(seg_len);
                [
                    p0[0] + t * (p1[0] - p0[0]) / seg_len,
                    p0[1] + t * (p1[1] - p0[1]) / seg_len,
                    p0[2] + t * (p1[2] - p0[2]) / seg_len,
                ]
            }
        };
        let band_lo = pose[2] - INACCESSIBLE_BELOW;
        let band_hi = pose[2] + INACCESSIBLE_ABOVE;
        let reward = centers
            .iter()
            .zip(&zs)
            .filter(|&(c, &z)| (z > band_hi || z < band_lo) && dist2(*c, pose) <= r2)
            .count() as u64;
        points.push(DecisionPoint { pose, reward });
    }
    Ok(RewardSequence { points })
}

/// Histogram prior over the reward values of a recorded run.
pub fn prior_from_rewards(rewards: &RewardSequence) -> Result<EmpiricalPrior, DistError> {
    EmpiricalPrior::from_samples(rewards.points().iter().map(|p| p.reward as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid_filled(dims: [usize; 3], fill: CellState) -> VoxelGrid {
        VoxelGrid::filled(1.0, [0.0; 3], dims, fill).unwrap()
    }

    #[test]
    fn all_free_grid_has_no_frontiers() {
        let grid = grid_filled([4, 4, 4], CellState::Free);
        assert!(detect_frontiers(&grid).is_empty());
    }

    #[test]
    fn lone_free_cell_among_unknown_is_frontier() {
        let mut grid = grid_filled([3, 3, 3], CellState::Unknown);
        grid.set(1, 1, 1, CellState::Free);
        let f = detect_frontiers(&grid);
        assert_eq!(f.len(), 1);
        assert!(f.contains(&[1, 1, 1]));
    }

    #[test]
    fn slab_interface_is_the_frontier_layer() {
        // 5x5x3: Free slab y in 0..=2 against an Unknown slab y in 3..=4;
        // the 5x3 layer of Free cells at y=2 is exactly the frontier.
        let mut grid = grid_filled([5, 5, 3], CellState::Unknown);
        for z in 0..3 {
            for y in 0..=2 {
                for x in 0..5 {
                    grid.set(x, y, z, CellState::Free);
                }
            }
        }
        let f = detect_frontiers(&grid);
        assert_eq!(f.len(), 15);
        assert!(f.iter().all(|&[_, y, _]| y == 2));
    }

    #[test]
    fn vertical_filter_keeps_strictly_outside_the_band() {
        // Cells centered every 1 m from z=0.5 up; carrier at z=1.5, so the
        // reachable band is [1.4, 2.5].
        let grid = grid_filled([1, 1, 7], CellState::Free);
        let all: BTreeSet<[usize; 3]> = (0..6).map(|z| [0, 0, z]).collect();
        let filtered = filter_vertical(&all, 1.5, &grid);
        // Keeps 0.5 (below), drops 1.5 and 2.5, keeps 3.5 and up.
        let kept: Vec<usize> = filtered.iter().map(|&[_, _, z]| z).collect();
        assert_eq!(kept, vec![0, 3, 4, 5]);
    }

    #[test]
    fn vertical_filter_band_edges() {
        let grid = grid_filled([1, 1, 4], CellState::Free);
        let cells: BTreeSet<[usize; 3]> = (0..4).map(|z| [0, 0, z]).collect();
        // Robot at z=0.55: cell center 0.5 sits 0.05 below - inside the
        // reachable band, dropped. Robot at 2.55: center 0.5 is 2.05 below,
        // kept; center 3.5 is 0.95 above, dropped.
        let f = filter_vertical(&cells, 0.55, &grid);
        assert!(!f.contains(&[0, 0, 0]));
        let f = filter_vertical(&cells, 2.55, &grid);
        assert!(f.contains(&[0, 0, 0]));
        assert!(!f.contains(&[0, 0, 3]));
    }

    #[test]
    fn band_filter_partitions_the_frontier_set() {
        let mut grid = grid_filled([6, 6, 6], CellState::Occupied);
        // Sprinkle a Free shell around an Unknown core.
        for z in 1..5 {
            for y in 1..5 {
                for x in 1..5 {
                    grid.set(x, y, z, CellState::Free);
                }
            }
        }
        grid.set(3, 3, 3, CellState::Unknown);
        let frontiers = detect_frontiers(&grid);
        let robot_z = 2.0;
        let outside = filter_vertical(&frontiers, robot_z, &grid);
        let inside: BTreeSet<[usize; 3]> = frontiers
            .iter()
            .filter(|&&c| {
                let z = grid.center(c)[2];
                (robot_z - INACCESSIBLE_BELOW..=robot_z + INACCESSIBLE_ABOVE).contains(&z)
            })
            .copied()
            .collect();
        assert!(outside.is_disjoint(&inside));
        let union: BTreeSet<_> = outside.union(&inside).copied().collect();
        assert_eq!(union, frontiers);
    }

    #[test]
    fn straight_path_resamples_to_expected_points() {
        let grid = grid_filled([2, 2, 2], CellState::Free);
        let path = PathTrace::new(vec![[0.0, 0.0, 0.0], [10.0, 0.0, 0.0]]).unwrap();
        let seq = rewards_along_path(&grid, &path, 2.5, 5.0).unwrap();
        let xs: Vec<f64> = seq.points().iter().map(|p| p.pose[0]).collect();
        assert_eq!(xs, vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        assert!(seq.points().iter().all(|p| p.reward == 0));
    }

    #[test]
    fn single_pose_path_gets_one_decision_point() {
        let grid = grid_filled([2, 2, 2], CellState::Free);
        let path = PathTrace::new(vec![[1.0, 1.0, 0.5]]).unwrap();
        let seq = rewards_along_path(&grid, &path, 2.5, 5.0).unwrap();
        assert_eq!(seq.points().len(), 1);
    }

    #[test]
    fn rewards_concentrate_near_the_feature() {
        // One inaccessible frontier cluster near the start of the path.
        let mut grid = grid_filled([20, 3, 6], CellState::Occupied);
        for x in 0..20 {
            grid.set(x, 1, 1, CellState::Free);
        }
        // High pocket above x=2: Free cell under an Unknown column.
        grid.set(2, 1, 3, CellState::Free);
        grid.set(2, 1, 4, CellState::Unknown);
        let path = PathTrace::new(vec![[0.5, 1.5, 1.5], [19.5, 1.5, 1.5]]).unwrap();
        let seq = rewards_along_path(&grid, &path, 19.0, 3.0).unwrap();
        assert_eq!(seq.points().len(), 2);
        assert_eq!(seq.points()[0].reward, 1);
        assert_eq!(seq.points()[1].reward, 0);
    }

    #[test]
    fn histogram_from_rewards() {
        let seq = RewardSequence {
            points: vec![
                DecisionPoint { pose: [0.0; 3], reward: 0 },
                DecisionPoint { pose: [1.0; 3], reward: 0 },
                DecisionPoint { pose: [2.0; 3], reward: 1 },
            ],
        };
        let prior = prior_from_rewards(&seq).unwrap();
        assert!((prior.pmf_int(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((prior.pmf_int(1) - 1.0 / 3.0).abs() < 1e-15);

        // Constant rewards collapse to a point mass.
        let constant = RewardSequence {
            points: vec![DecisionPoint { pose: [0.0; 3], reward: 4 }; 5],
        };
        let prior = prior_from_rewards(&constant).unwrap();
        assert_eq!(prior.pmf_int(4), 1.0);
        assert_eq!(prior.counts().count(), 1);
    }

    #[test]
    fn cmp_fit_recovers_poisson_rewards() {
        use crate::distributions::{fit_cmp, Prior};
        use crate::sim::generate_iid_sequence;
        let prior = crate::distributions::PoissonPrior::new(3.0).unwrap();
        let draws = generate_iid_sequence(&prior, 10_000, 404);
        let seq = RewardSequence {
            points: draws
                .iter()
                .map(|&x| DecisionPoint { pose: [0.0; 3], reward: x as u64 })
                .collect(),
        };
        let hist = prior_from_rewards(&seq).unwrap();
        assert!((hist.mean() - 3.0).abs() < 0.1);
        let lambdas: Vec<f64> = (1..=12).map(|k| k as f64 * 0.5).collect();
        let nus = [0.5, 0.8, 1.0, 1.25, 2.0];
        let (_, nu) = fit_cmp(&hist, &lambdas, &nus).unwrap();
        assert!((0.8..=1.25).contains(&nu), "nu = {nu}");
    }

    #[test]
    fn grid_text_round_trip_and_errors() {
        let mut grid = grid_filled([3, 2, 2], CellState::Occupied);
        grid.set(1, 0, 1, CellState::Free);
        grid.set(2, 1, 0, CellState::Unknown);
        let text = grid.to_text();
        let back = VoxelGrid::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);

        match VoxelGrid::parse("VGRID2 1 0 0 0 1 1 1\n.") {
            Err(GridError::Parse { line: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match VoxelGrid::parse("VGRID1 1 0 0 0 2 1 1\n.x") {
            Err(GridError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match VoxelGrid::parse("VGRID1 1 0 0 0 2 1 1\n.") {
            Err(GridError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn path_csv_round_trip() {
        let path = PathTrace::new(vec![[1.0, 3.5, 1.5], [38.5, 3.5, 1.5]]).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let back = PathTrace::read_csv(&buf[..]).unwrap();
        assert_eq!(back, path);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rewards_shrink_with_radius(
            cells in prop::collection::vec((0usize..6, 0usize..6, 0usize..6), 1..20),
            r1 in 0.5f64..4.0,
            dr in 0.1f64..4.0,
        ) {
            let mut grid = grid_filled([6, 6, 6], CellState::Occupied);
            for &(x, y, z) in &cells {
                grid.set(x, y, z, CellState::Free);
            }
            for &(x, y, z) in &cells {
                if z < 5 {
                    grid.set(x, y, z + 1, CellState::Unknown);
                }
            }
            let path = PathTrace::new(vec![[0.0, 0.0, 0.5], [6.0, 6.0, 0.5]]).unwrap();
            let small = rewards_along_path(&grid, &path, 2.0, r1).unwrap();
            let large = rewards_along_path(&grid, &path, 2.0, r1 + dr).unwrap();
            for (a, b) in small.points().iter().zip(large.points()) {
                prop_assert!(a.reward <= b.reward);
            }
        }

        #[test]
        fn frontier_membership_is_local(
            seed_cells in prop::collection::vec((0usize..5, 0usize..5, 0usize..5, 0u8..3), 8..40),
            probe in (0usize..5, 0usize..5, 0usize..5),
            mutate in (0usize..5, 0usize..5, 0usize..5, 0u8..3),
        ) {
            let states = [CellState::Unknown, CellState::Free, CellState::Occupied];
            let mut grid = grid_filled([5, 5, 5], CellState::Occupied);
            for &(x, y, z, s) in &seed_cells {
                grid.set(x, y, z, states[s as usize]);
            }
            let (px, py, pz) = probe;
            let (mx, my, mz, ms) = mutate;
            // Only mutate outside the probe cell's 6-neighborhood.
            let manhattan = px.abs_diff(mx) + py.abs_diff(my) + pz.abs_diff(mz);
            prop_assume!(manhattan > 1);
            let before = detect_frontiers(&grid).contains(&[px, py, pz]);
            grid.set(mx, my, mz, states[ms as usize]);
            let after = detect_frontiers(&grid).contains(&[px, py, pz]);
            prop_assert_eq!(before, after);
        }
    }
}
