//! Module constructors behind `sl2var gen`.

use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sl2var::abelian::FinAbGroup;
use sl2var::arith::Field;
use sl2var::presentation::{Action, ActionKind};
use sl2var::zoo;
use sl2var::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Natural,
    Trivial,
    Sum,
    Conjugate,
    Twist,
    Steinberg,
    Char3Basic,
    Char3Sigma,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Characteristic of K.
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Degree of K over its prime field.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Build an sl2(K) action instead of an SL2(K) action.
    #[arg(long)]
    pub lie: bool,
    /// Invariant factors of the trivial module, e.g. `5,25`.
    #[arg(long, value_delimiter = ',')]
    pub orders: Vec<u64>,
    /// Seed for the random automorphism used by `conjugate`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Frobenius power used by `twist`.
    #[arg(long, default_value_t = 1)]
    pub power: u32,
    /// sigma for `char3-sigma`: frobenius, trace, zero, identity, or a JSON matrix over F_3.
    #[arg(long, default_value = "frobenius")]
    pub sigma: String,
}

fn kind(lie: bool) -> ActionKind {
    if lie {
        ActionKind::Lie
    } else {
        ActionKind::Group
    }
}

fn malformed(pointer: &str, reason: impl Into<String>) -> Error {
    Error::Malformed { pointer: pointer.into(), reason: reason.into() }
}

fn sigma_matrix(field: &Field, spec: &str) -> Result<Vec<Vec<i64>>> {
    let n = field.degree() as usize;
    Ok(match spec {
        "frobenius" => zoo::frobenius_matrix(field),
        "trace" => zoo::trace_matrix(field),
        "zero" => vec![vec![0; n]; n],
        "identity" => (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        json => serde_json::from_str(json).map_err(|e| malformed("--sigma", e.to_string()))?,
    })
}

/// Build the requested module; `inputs` are the already parsed `--input` files.
pub fn generate(args: &GenArgs, max_field_size: u64, inputs: &[Action]) -> Result<Action> {
    let field = || Field::with_bound(args.p, args.n, max_field_size);
    let single_input = || match inputs {
        [a] => Ok(a),
        _ => Err(malformed("--input", format!("expected exactly one input, got {}", inputs.len()))),
    };
    match args.family {
        Family::Natural => {
            let f = field()?;
            Ok(if args.lie {
                Action::Lie(zoo::natural_lie_module(&f))
            } else {
                Action::Group(zoo::natural_group_module(&f))
            })
        }
        Family::Trivial => {
            let module = FinAbGroup::new(args.orders.clone())?;
            Ok(zoo::trivial_module(&module, &field()?, kind(args.lie)))
        }
        Family::Sum => {
            if inputs.is_empty() {
                return Err(malformed("--input", "sum needs at least one input"));
            }
            zoo::direct_sum(inputs)
        }
        Family::Conjugate => {
            let a = single_input()?;
            let g = zoo::random_automorphism(a.module(), &mut ChaCha8Rng::seed_from_u64(args.seed));
            zoo::conjugate(a, &g)
        }
        Family::Twist => zoo::twist(single_input()?, args.power),
        Family::Steinberg => Ok(Action::Group(zoo::steinberg_tensor(args.p)?)),
        Family::Char3Basic => Ok(Action::Lie(if args.n == 1 {
            zoo::char3_basic_counterexample()
        } else {
            zoo::char3_basic_counterexample_over(&Field::with_bound(3, args.n, max_field_size)?)?
        })),
        Family::Char3Sigma => {
            let f = Field::with_bound(3, args.n.max(2), max_field_size)?;
            let sigma = sigma_matrix(&f, &args.sigma)?;
            Ok(Action::Lie(zoo::char3_sigma_module(&f, &sigma)?.action))
        }
    }
}
