//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hecke",
    version,
    about = "Spherical Hecke algebras, Satake parameters and mod-p theta operators",
    after_help = "Every option marked [env: ...] may also be set in the environment or in a \
                  --config JSON file. Precedence: command line, then environment, then config \
                  file, then built-in defaults."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// JSON file with default option values
    #[arg(long, global = true, env = "HECKE_CONFIG")]
    pub config: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, env = "HECKE_FORMAT", value_enum)]
    pub format: Option<Format>,

    /// Root datum: a builtin name such as gl3, gsp4, gl2xgl1, or a JSON file
    #[arg(long, global = true, env = "HECKE_DATUM")]
    pub datum: Option<String>,

    /// Characteristic
    #[arg(long, global = true, env = "HECKE_P")]
    pub p: Option<u64>,

    /// Extension degree of the coefficient field F_{p^k}
    #[arg(long = "ext-degree", global = true, env = "HECKE_EXT_DEGREE")]
    pub ext_degree: Option<usize>,

    /// Weight of a modular form
    #[arg(long, global = true, env = "HECKE_K", allow_hyphen_values = true)]
    pub k: Option<i64>,

    /// Number of q-expansion coefficients to check
    #[arg(long = "N", global = true, env = "HECKE_N")]
    pub n: Option<usize>,

    /// Hecke prime, or a comma-separated list of them
    #[arg(long, global = true, env = "HECKE_ELL")]
    pub ell: Option<String>,

    /// Residue field size q_v
    #[arg(long, global = true, env = "HECKE_Q")]
    pub q: Option<i64>,

    /// Chosen square root of q in F_{p^k}, as `3` or `1,2`
    #[arg(long = "sqrt-q", global = true, env = "HECKE_SQRT_Q")]
    pub sqrt_q: Option<String>,

    /// Seed for randomized commands
    #[arg(long, global = true, env = "HECKE_SEED")]
    pub seed: Option<u64>,

    /// Dominant weights separated by `;`, such as `2,0;1,1`
    #[arg(long, global = true, env = "HECKE_CUTOFF", allow_hyphen_values = true)]
    pub cutoff: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Tensor,
    Sym,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a root datum
    Rootdatum,
    /// Dominant weights below a dominant weight, in graded order
    Weights(WeightArg),
    /// Weight multiplicities of an irreducible representation
    Mult(WeightArg),
    /// Products and powers in the representation ring
    Tensor(TensorArgs),
    /// Satake transform of a Hecke element
    Satake(TransformArgs),
    /// Inverse Satake transform of a character
    SatakeInv(TransformArgs),
    /// Product of two Hecke elements
    HeckeMul(HeckeMulArgs),
    /// Lusztig q-analog and the Satake matrix entries for a pair of weights
    KlPoly(KlArgs),
    /// Satake parameters over finite fields
    #[command(subcommand)]
    Param(ParamCommand),
    /// Admissible automorphic weights
    #[command(subcommand)]
    Adm(AdmCommand),
    /// Modular forms mod p at level one
    #[command(subcommand)]
    Mf(MfCommand),
    /// Run the acceptance suite
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct WeightArg {
    /// Dominant weight, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub weight: String,
}

#[derive(Args, Debug)]
pub struct TensorArgs {
    /// Highest weights of the factors; repeat for a product
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub weight: Vec<String>,
    /// Raise the single given weight to this power
    #[arg(long)]
    pub power: Option<u32>,
    /// Kind of power
    #[arg(long, value_enum, default_value = "tensor")]
    pub mode: Mode,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Basis element indexed by this weight
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    pub weight: Option<String>,
    /// JSON file holding the element to transform
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HeckeMulArgs {
    /// Two basis weights
    #[arg(long, allow_hyphen_values = true, num_args = 1)]
    pub weight: Vec<String>,
    /// Two Hecke element JSON files
    #[arg(long)]
    pub input: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KlArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PointArgs {
    /// JSON file holding a torus point
    #[arg(long)]
    pub point: Option<PathBuf>,
    /// Point coordinates separated by `;`, each as `3` or `1,2`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "point")]
    pub coords: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ParamCommand {
    /// Characters and the Hecke eigensystem of a torus point
    Eval {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Twist a point by a central character
    Twist {
        #[command(flatten)]
        point: PointArgs,
        /// Character name, such as det or nu
        #[arg(long)]
        eta: Option<String>,
        /// Twisting element; defaults to the image of q
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Recover the Satake parameter of a gl(n) eigensystem
    Recover {
        /// Eigensystem JSON file
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare two eigensystems against the twist by a central character
    CheckTwist {
        /// First eigensystem; when absent it is built from the point
        #[arg(long, requires = "psi2")]
        psi1: Option<PathBuf>,
        #[arg(long, requires = "psi1")]
        psi2: Option<PathBuf>,
        /// Points for data where recovery is unavailable
        #[arg(long)]
        s1: Option<PathBuf>,
        #[arg(long)]
        s2: Option<PathBuf>,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        eta: Option<String>,
        /// Add one to the second eigensystem at this weight
        #[arg(long, allow_hyphen_values = true)]
        perturb: Option<String>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct SignatureArgs {
    /// Signature JSON, inline or as a file path
    #[arg(long)]
    pub signature: Option<String>,
    /// Shorthand for the case C signature with one place of size g
    #[arg(long, conflicts_with = "signature")]
    pub siegel: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum AdmCommand {
    /// Decide admissibility of a weight
    Check {
        #[command(flatten)]
        sig: SignatureArgs,
        /// Weight blocks separated by `;`
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// Also test membership in the matching power of V^2
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Constituents of a power of V^2
    Constituents {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value = "sym")]
        mode: Mode,
    },
    /// The weight reached by a differential operator
    Shift {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Depth |lambda| / 2 of an admissible weight
    Depth {
        #[command(flatten)]
        sig: SignatureArgs,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct FormArgs {
    /// delta, e4, e6, hasse, or basis:<i> for the i-th basis form of weight k
    #[arg(long)]
    pub form: Option<String>,
    /// q-expansion JSON file
    #[arg(long, conflicts_with = "form")]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum MfCommand {
    /// Reductions of the monomial basis of M_k
    Basis,
    /// Apply theta
    Theta {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Apply T_ell
    Hecke {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Weight filtration
    Filtration {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Filtrations of the theta iterates
    Cycle {
        #[command(flatten)]
        form: FormArgs,
        /// Number of iterates; at least p
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Check T_ell theta = ell theta T_ell on a form or on all of basis(k, p)
    Commcheck {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Check the eigenvalue twist of theta f against the twist theorem
    Twistcheck {
        #[command(flatten)]
        form: FormArgs,
    },
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Run a single criterion
    #[arg(long)]
    pub criterion: Option<u32>,
}
