use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("q-integer [0] is not defined")]
    ZeroQInteger,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChaseError {
    #[error("exactness forces {label} = {value} < 0")]
    NegativeDimension { label: String, value: String },
    #[error("{label} is not determined by the exact sequences")]
    Unresolvable { label: String },
    #[error("inconsistent exact sequences: {detail}")]
    Inconsistent { detail: String },
    #[error("shared label {label} occurs in fewer than two sequences")]
    UnsharedLabel { label: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("long exact sequence does not force the cohomology of {model} twisted by ({a},{b})")]
    AmbiguousRank { model: String, a: i64, b: i64 },
    #[error("{model} does not have one-dimensional support")]
    NotOneDimensional { model: String },
    #[error("resolution of {model} is not a torsion presentation: {detail}")]
    BadResolution { model: String, detail: String },
    #[error("neither slope vanishing nor a forced chase decides Hom({from}, {to})")]
    Undecidable { from: String, to: String },
    #[error("cohomology of {model} at ({a},{b}) violates the Euler characteristic")]
    EulerMismatch { model: String, a: i64, b: i64 },
    #[error(transparent)]
    Chase(#[from] ChaseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairsError {
    #[error("slope of {0} is undefined (r + s = 0)")]
    ZeroRank(String),
    #[error(
        "no registered pair class with Hilbert polynomial {hilbert} and gamma dimension {gamma}"
    )]
    UnregisteredClass { hilbert: String, gamma: u32 },
    #[error("wall invariant violated: {0}")]
    WallInvariant(String),
    #[error("moduli of {pair} is not smooth: Ext^2 = {dim}")]
    NotSmooth { pair: String, dim: u64 },
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    Chase(#[from] ChaseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbError {
    #[error("surfaces with odd Betti numbers are not supported")]
    OddCohomology,
    #[error("negative projective fiber dimension {0}")]
    NegativeFiber(i64),
    #[error("malformed point configuration: {0}")]
    MalformedConfiguration(String),
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse registry: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("invalid registry entry {name}: {detail}")]
    Invalid { name: String, detail: String },
    #[error("registry fact {fact} disagrees with the computed value {computed}")]
    FactMismatch { fact: String, computed: String },
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

/// Top-level error, carrying the process exit code used by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),
    #[error("ledger invariant violated: {0}")]
    Ledger(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Pairs(#[from] PairsError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    Chase(#[from] ChaseError),
    #[error(transparent)]
    Hilb(#[from] HilbError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl Error {
    /// 2 for golden mismatches, 3 for registry and chase failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::GoldenMismatch(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
