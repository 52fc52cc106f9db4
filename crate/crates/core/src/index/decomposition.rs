use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{Angle, NormalFormBlock, SymplecticMatrix};

/// A normal-form block together with the first index `i₁` of its path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockPath {
    pub block: NormalFormBlock,
    pub i1: i64,
}

/// Ordered ⋄-decomposition of a monodromy with per-block first indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionJson", into = "DecompositionJson")]
pub struct Decomposition {
    n: usize,
    blocks: Vec<BlockPath>,
}

impl Decomposition {
    pub fn new(n: usize, blocks: Vec<BlockPath>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        for b in &blocks {
            b.block.validate()?;
        }
        let dims: usize = blocks.iter().map(|b| b.block.dim_half()).sum();
        if dims != n {
            return Err(Error::Invalid(format!(
                "blocks span dimension {} but n = {n} requires {}",
                2 * dims,
                2 * n
            )));
        }
        Ok(Self { n, blocks })
    }

    /// Blocks in order, with the whole first index carried by the first block.
    ///
    /// Every iteration formula is affine in `i₁` with slope `2m−1`, so only the
    /// total matters for indices, nullities and gaps.
    pub fn with_total_i1(blocks: &[NormalFormBlock], total_i1: i64) -> Result<Self> {
        let n = blocks.iter().map(|b| b.dim_half()).sum();
        let paths = blocks
            .iter()
            .enumerate()
            .map(|(k, &block)| BlockPath {
                block,
                i1: if k == 0 { total_i1 } else { 0 },
            })
            .collect();
        Self::new(n, paths)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[BlockPath] {
        &self.blocks
    }

    pub fn total_i1(&self) -> i64 {
        self.blocks.iter().map(|b| b.i1).sum()
    }

    /// Requirement for monodromies of closed characteristics on convex hypersurfaces.
    pub fn validate_convex(&self) -> Result<()> {
        if self.total_i1() < self.n as i64 {
            return Err(Error::Invalid(format!(
                "total i1 = {} is below n = {}",
                self.total_i1(),
                self.n
            )));
        }
        Ok(())
    }

    /// Exact elliptic height from the block types.
    pub fn elliptic_height(&self) -> usize {
        self.blocks.iter().map(|b| b.block.elliptic_height()).sum()
    }

    pub fn realize(&self) -> SymplecticMatrix {
        let mut it = self.blocks.iter();
        let first = it
            .next()
            .expect("non-empty decomposition")
            .block
            .realize_matrix();
        let m = it.fold(first, |acc, b| {
            crate::symplectic::matrix_diamond_raw(&acc, &b.block.realize_matrix())
        });
        SymplecticMatrix::new(m).expect("normal forms are symplectic")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    n: usize,
    blocks: Vec<BlockJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BJson {
    Scalar(f64),
    Matrix([[f64; 2]; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<BJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    /// Exact angle `θ = p/q · π` as `[p, q]`; takes precedence over `theta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta_pi: Option<[i64; 2]>,
    i1: i64,
}

impl BlockJson {
    fn angle(&self) -> std::result::Result<Angle, Error> {
        match (self.theta_pi, self.theta) {
            (Some([p, q]), _) => Angle::pi_ratio(p, q),
            (None, Some(t)) => Ok(Angle::radians(t)),
            (None, None) => Err(Error::Invalid(format!("{} block needs theta", self.kind))),
        }
    }

    fn to_block(&self) -> Result<NormalFormBlock> {
        let scalar_b = || match self.b {
            Some(BJson::Scalar(v)) => Ok(v),
            None => Ok(0.0),
            Some(BJson::Matrix(_)) => Err(Error::Invalid("jordan2 b must be a number".into())),
        };
        match self.kind.as_str() {
            "dilation" => NormalFormBlock::dilation(
                self.lambda
                    .ok_or_else(|| Error::Invalid("dilation needs lambda".into()))?,
            ),
            "jordan2" => NormalFormBlock::jordan2(
                self.lambda
                    .ok_or_else(|| Error::Invalid("jordan2 needs lambda".into()))?,
                scalar_b()?,
            ),
            "rotation2" => NormalFormBlock::rotation2(self.angle()?),
            "rotation4" => match self.b {
                Some(BJson::Matrix(b)) => NormalFormBlock::rotation4(self.angle()?, b),
                _ => Err(Error::Invalid("rotation4 needs a 2x2 b".into())),
            },
            other => Err(Error::Invalid(format!("unknown block kind {other:?}"))),
        }
    }

    fn from_path(p: &BlockPath) -> Self {
        let mut out = BlockJson {
            kind: String::new(),
            lambda: None,
            b: None,
            theta: None,
            theta_pi: None,
            i1: p.i1,
        };
        let set_angle = |out: &mut BlockJson, a: Angle| {
            out.theta = Some(a.value());
            if let Angle::PiRatio { num, den } = a {
                out.theta_pi = Some([num, den]);
            }
        };
        match p.block {
            NormalFormBlock::Dilation { lambda } => {
                out.kind = "dilation".into();
                out.lambda = Some(lambda);
            }
            NormalFormBlock::Jordan2 { lambda, b } => {
                out.kind = "jordan2".into();
                out.lambda = Some(lambda as f64);
                out.b = Some(BJson::Scalar(b as f64));
            }
            NormalFormBlock::Rotation2 { theta } => {
                out.kind = "rotation2".into();
                set_angle(&mut out, theta);
            }
            NormalFormBlock::Rotation4 { theta, b, .. } => {
                out.kind = "rotation4".into();
                set_angle(&mut out, theta);
                out.b = Some(BJson::Matrix(b));
            }
        }
        out
    }
}

impl TryFrom<DecompositionJson> for Decomposition {
    type Error = Error;
    fn try_from(j: DecompositionJson) -> Result<Self> {
        let blocks = j
            .blocks
            .iter()
            .map(|b| {
                Ok(BlockPath {
                    block: b.to_block()?,
                    i1: b.i1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Decomposition::new(j.n, blocks)
    }
}

impl From<Decomposition> for DecompositionJson {
    fn from(d: Decomposition) -> Self {
        DecompositionJson {
            n: d.n,
            blocks: d.blocks.iter().map(BlockJson::from_path).collect(),
        }
    }
}
