//! The 23 classical benchmark functions F1–F23.
//!
//! Definitions follow the suite popularized alongside the Grey Wolf
//! Optimizer: unimodal F1–F7, multimodal F8–F13 (dimension configurable) and
//! fixed-dimension multimodal F14–F23.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DdwError, Result};
use crate::fitness::Objective;

/// Default dimension of the scalable functions F1–F13.
pub const DEFAULT_DIM: usize = 30;

/// Benchmark function identifier, `F1` to `F23`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FunctionId(u8);

impl FunctionId {
    pub fn new(n: u8) -> Result<Self> {
        if (1..=23).contains(&n) {
            Ok(FunctionId(n))
        } else {
            Err(DdwError::InvalidInput(format!("unknown benchmark function F{n}")))
        }
    }

    pub fn all() -> impl Iterator<Item = FunctionId> {
        (1..=23).map(FunctionId)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Fixed dimension for F14–F23, `None` for the scalable functions.
    pub fn fixed_dim(self) -> Option<usize> {
        match self.0 {
            14 | 16 | 17 | 18 => Some(2),
            15 | 21 | 22 | 23 => Some(4),
            19 => Some(3),
            20 => Some(6),
            _ => None,
        }
    }

    /// Search box `(lower, upper)` for dimension `dim`.
    pub fn bounds(self, dim: usize) -> (Vec<f64>, Vec<f64>) {
        let uniform = |lo: f64, hi: f64| (vec![lo; dim], vec![hi; dim]);
        match self.0 {
            1 | 3 | 4 | 6 => uniform(-100.0, 100.0),
            2 => uniform(-10.0, 10.0),
            5 => uniform(-30.0, 30.0),
            7 => uniform(-1.28, 1.28),
            8 => uniform(-500.0, 500.0),
            9 => uniform(-5.12, 5.12),
            10 => uniform(-32.0, 32.0),
            11 => uniform(-600.0, 600.0),
            12 | 13 => uniform(-50.0, 50.0),
            14 => uniform(-65.536, 65.536),
            15 | 16 => uniform(-5.0, 5.0),
            17 => (vec![-5.0, 0.0], vec![10.0, 15.0]),
            18 => uniform(-2.0, 2.0),
            19 | 20 => uniform(0.0, 1.0),
            _ => uniform(0.0, 10.0),
        }
    }

    /// Global minimum value at dimension `dim`.
    pub fn known_optimum(self, dim: usize) -> f64 {
        match self.0 {
            8 => -418.982_887_272_433_9 * dim as f64,
            14 => 0.998_003_837_794_449_3,
            15 => 3.074_859_878_056e-4,
            16 => -1.031_628_453_489_877,
            17 => 0.397_887_357_729_738_2,
            18 => 3.0,
            19 => -3.862_782_147_820_755,
            20 => -3.322_368_011_415_515,
            21 => -10.153_199_679_058_23,
            22 => -10.402_940_566_818_66,
            23 => -10.536_409_816_692_05,
            _ => 0.0,
        }
    }

    /// A point attaining [`known_optimum`](Self::known_optimum).
    pub fn optimizer_location(self, dim: usize) -> Vec<f64> {
        match self.0 {
            5 | 13 => vec![1.0; dim],
            6 => vec![-0.5; dim],
            8 => vec![420.968_746_359_982; dim],
            12 => vec![-1.0; dim],
            14 => vec![-31.978_335_306_762_744, -31.978_330_858_510_354],
            15 => vec![
                0.192_833_453_042_751_23,
                0.190_836_240_275_969_3,
                0.123_117_299_076_027_14,
                0.135_765_990_339_841_96,
            ],
            16 => vec![0.089_842_016_529_270_98, -0.712_656_401_380_720_2],
            17 => vec![PI, 2.275],
            18 => vec![0.0, -1.0],
            19 => vec![
                0.114_614_327_869_381_44,
                0.555_648_849_854_593_4,
                0.852_546_952_926_669_5,
            ],
            20 => vec![
                0.201_689_512_892_290_5,
                0.150_010_693_237_428_97,
                0.476_873_976_761_176_8,
                0.275_332_430_783_950_8,
                0.311_651_618_487_395_87,
                0.657_300_534_998_914_2,
            ],
            21 => vec![
                4.000_037_152_376_549,
                4.000_133_278_657_566,
                4.000_037_151_057_555,
                4.000_133_277_090_425,
            ],
            22 => vec![
                4.000_572_914_277_084,
                4.000_689_366_040_889,
                3.999_489_710_793_844_7,
                3.999_606_160_006_792_3,
            ],
            23 => vec![
                4.000_746_533_201_553,
                4.000_592_934_538_832,
                3.999_663_397_220_255_8,
                3.999_509_801_285_225_5,
            ],
            _ => vec![0.0; dim],
        }
    }

    /// Raw function value; no dimension or bounds checks.
    pub fn value(self, x: &[f64]) -> f64 {
        match self.0 {
            1 => x.iter().map(|v| v * v).sum(),
            2 => x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>(),
            3 => {
                let mut prefix = 0.0;
                x.iter()
                    .map(|v| {
                        prefix += v;
                        prefix * prefix
                    })
                    .sum()
            }
            4 => x.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
            5 => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            6 => x.iter().map(|v| (v + 0.5).powi(2)).sum(),
            7 => {
                let quartic: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                    .sum();
                quartic + point_noise(x)
            }
            8 => x.iter().map(|v| -v * v.abs().sqrt().sin()).sum(),
            9 => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            10 => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            11 => {
                let s = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let p: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                s - p + 1.0
            }
            12 => penalized_1(x),
            13 => penalized_2(x),
            14 => shekel_foxholes(x),
            15 => kowalik(x),
            16 => {
                let (a, b) = (x[0], x[1]);
                4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b + 4.0 * b.powi(4)
            }
            17 => {
                let (a, b) = (x[0], x[1]);
                (b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0).powi(2)
                    + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos()
                    + 10.0
            }
            18 => {
                let (a, b) = (x[0], x[1]);
                (1.0 + (a + b + 1.0).powi(2)
                    * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b))
                    * (30.0
                        + (2.0 * a - 3.0 * b).powi(2)
                            * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b
                                + 27.0 * b * b))
            }
            19 => hartmann(x, &HARTMANN3_A, &HARTMANN3_P),
            20 => hartmann(x, &HARTMANN6_A, &HARTMANN6_P),
            21 => shekel(x, 5),
            22 => shekel(x, 7),
            _ => shekel(x, 10),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.0)
    }
}

impl FromStr for FunctionId {
    type Err = DdwError;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.strip_prefix(['F', 'f']).unwrap_or(s);
        let n: u8 = digits
            .parse()
            .map_err(|_| DdwError::InvalidInput(format!("unknown benchmark function '{s}'")))?;
        FunctionId::new(n)
    }
}

impl TryFrom<String> for FunctionId {
    type Error = DdwError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FunctionId> for String {
    fn from(id: FunctionId) -> String {
        id.to_string()
    }
}

/// Checked evaluation: the point must have the function's dimension and lie
/// inside its box.
pub fn eval_benchmark(id: FunctionId, point: &[f64]) -> Result<f64> {
    let problem = BenchmarkProblem::new(id, point.len())?;
    let (lo, hi) = (problem.lower_bounds(), problem.upper_bounds());
    for (i, &v) in point.iter().enumerate() {
        if !(lo[i] <= v && v <= hi[i]) {
            return Err(DdwError::InvalidInput(format!(
                "{id} coordinate {i} = {v} outside [{}, {}]",
                lo[i], hi[i]
            )));
        }
    }
    Ok(id.value(point))
}

/// Global minimum of a function at its default dimension.
pub fn known_optimum(id: &str) -> Result<f64> {
    let id: FunctionId = id.parse()?;
    Ok(id.known_optimum(id.fixed_dim().unwrap_or(DEFAULT_DIM)))
}

/// A benchmark function at a concrete dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkProblem {
    pub id: FunctionId,
    pub dim: usize,
}

impl BenchmarkProblem {
    pub fn new(id: FunctionId, dim: usize) -> Result<Self> {
        match id.fixed_dim() {
            Some(d) if d != dim => Err(DdwError::InvalidInput(format!(
                "{id} is defined for dimension {d}, got {dim}"
            ))),
            _ if dim == 0 => Err(DdwError::InvalidInput("dimension must be positive".into())),
            // Rosenbrock needs a neighbouring pair.
            _ if id.0 == 5 && dim < 2 => {
                Err(DdwError::InvalidInput("F5 needs dimension >= 2".into()))
            }
            _ => Ok(BenchmarkProblem { id, dim }),
        }
    }

    /// The function at its fixed or default dimension.
    pub fn with_default_dim(id: FunctionId) -> Self {
        BenchmarkProblem {
            id,
            dim: id.fixed_dim().unwrap_or(DEFAULT_DIM),
        }
    }

    pub fn known_optimum(&self) -> f64 {
        self.id.known_optimum(self.dim)
    }

    pub fn optimizer_location(&self) -> Vec<f64> {
        self.id.optimizer_location(self.dim)
    }
}

impl Objective for BenchmarkProblem {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.id.value(x)
    }

    fn lower_bounds(&self) -> Vec<f64> {
        self.id.bounds(self.dim).0
    }

    fn upper_bounds(&self) -> Vec<f64> {
        self.id.bounds(self.dim).1
    }

    fn name(&self) -> String {
        self.id.to_string()
    }
}

/// Uniform noise in [0, 1) derived from the bits of `x`, so F7 stays a pure
/// function of its input.
fn point_noise(x: &[f64]) -> f64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for v in x {
        h ^= v.to_bits();
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
        h ^= h >> 29;
    }
    h = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^= h >> 31;
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn ufun(x: f64, a: f64, k: f64, m: i32) -> f64 {
    if x > a {
        k * (x - a).powi(m)
    } else if x < -a {
        k * (-x - a).powi(m)
    } else {
        0.0
    }
}

fn penalized_1(x: &[f64]) -> f64 {
    let n = x.len();
    let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
    let mut s = 10.0 * (PI * y[0]).sin().powi(2);
    for i in 0..n - 1 {
        s += (y[i] - 1.0).powi(2) * (1.0 + 10.0 * (PI * y[i + 1]).sin().powi(2));
    }
    s += (y[n - 1] - 1.0).powi(2);
    PI / n as f64 * s + x.iter().map(|&v| ufun(v, 10.0, 100.0, 4)).sum::<f64>()
}

fn penalized_2(x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = (3.0 * PI * x[0]).sin().powi(2);
    for i in 0..n - 1 {
        s += (x[i] - 1.0).powi(2) * (1.0 + (3.0 * PI * x[i + 1]).sin().powi(2));
    }
    s += (x[n - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * x[n - 1]).sin().powi(2));
    0.1 * s + x.iter().map(|&v| ufun(v, 5.0, 100.0, 4)).sum::<f64>()
}

fn shekel_foxholes(x: &[f64]) -> f64 {
    const GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];
    let mut s = 0.0;
    for j in 0..25 {
        let a0 = GRID[j % 5];
        let a1 = GRID[j / 5];
        s += 1.0 / ((j + 1) as f64 + (x[0] - a0).powi(6) + (x[1] - a1).powi(6));
    }
    1.0 / (1.0 / 500.0 + s)
}

fn kowalik(x: &[f64]) -> f64 {
    const A: [f64; 11] = [
        0.1957, 0.1947, 0.1735, 0.16, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
    ];
    const B_INV: [f64; 11] = [0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];
    A.iter()
        .zip(B_INV)
        .map(|(a, binv)| {
            let b = 1.0 / binv;
            (a - x[0] * (b * b + x[1] * b) / (b * b + x[2] * b + x[3])).powi(2)
        })
        .sum()
}

const HARTMANN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const HARTMANN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.03815, 0.5743, 0.8828],
];
const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartmann<const N: usize>(x: &[f64], a: &[[f64; N]; 4], p: &[[f64; N]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..N).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMANN_C[i] * (-inner).exp()
        })
        .sum::<f64>()
}

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];
const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

fn shekel(x: &[f64], m: usize) -> f64 {
    -(0..m)
        .map(|i| {
            let d: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
            1.0 / (d + SHEKEL_C[i])
        })
        .sum::<f64>()
}
