//! Named fixtures addressable as `builtin:name?key=value&...`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::evolution::GeneratorSchedule;
use crate::fixtures;
use crate::gksl::GkslPresentation;
use crate::operator::Operator;
use crate::superop::SuperOperator;

pub const PREFIX: &str = "builtin:";

pub const MAPS: &[&str] = &[
    "identity",
    "transpose",
    "depolarizing",
    "dephasing",
    "amplitude-damping",
    "random-cp",
    "zero",
];

pub const GENERATORS: &[&str] = &[
    "amplitude-damping",
    "depolarizing",
    "dephasing",
    "commutator",
    "transpose-minus-identity",
    "random-dcp",
    "block-dcp",
    "zero",
];

pub const SCHEDULES: &[&str] = &["driven-qubit"];

pub const STATES: &[&str] = &["maximally-mixed", "basis-state"];

#[derive(Debug, Clone, PartialEq)]
pub struct Address {
    pub name: String,
    params: BTreeMap<String, String>,
}

impl Address {
    pub fn parse(source: &str) -> Result<Self> {
        let body = source
            .strip_prefix(PREFIX)
            .ok_or_else(|| Error::InvalidArgument(format!("{source:?} is not a builtin address")))?;
        let (name, query) = body.split_once('?').unwrap_or((body, ""));
        let mut params = BTreeMap::new();
        for pair in query.split('&').filter(|s| !s.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("malformed parameter {pair:?}")))?;
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::InvalidArgument(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidArgument(format!(
                "builtin {:?} has no parameter {k:?} (accepted: {keys:?})",
                self.name
            ))),
            None => Ok(()),
        }
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(Error::InvalidArgument(format!("parameter {key}={v:?} is not a finite number"))),
            },
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("parameter {key}={v:?} is not a nonnegative integer"))),
        }
    }

    fn dim(&self, default: usize) -> Result<usize> {
        let d = self.usize_or("d", default)?;
        if !(1..=64).contains(&d) {
            return Err(Error::InvalidArgument(format!("dimension d={d} outside 1..=64")));
        }
        Ok(d)
    }

    fn unit(&self, key: &str, default: f64) -> Result<f64> {
        let x = self.f64_or(key, default)?;
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidArgument(format!("parameter {key}={x} outside [0, 1]")));
        }
        Ok(x)
    }

    fn unknown(&self, kind: &str, names: &[&str]) -> Error {
        Error::InvalidArgument(format!("unknown builtin {kind} {:?} (known: {names:?})", self.name))
    }
}

/// A builtin map (channel or other superoperator).
pub fn map(addr: &Address) -> Result<SuperOperator<f64>> {
    Ok(match addr.name.as_str() {
        "identity" => {
            addr.allow(&["d"])?;
            fixtures::identity_map(addr.dim(2)?)
        }
        "transpose" => {
            addr.allow(&["d"])?;
            fixtures::transpose_map(addr.dim(2)?)
        }
        "depolarizing" => {
            addr.allow(&["d", "p"])?;
            fixtures::depolarizing_channel(addr.dim(2)?, addr.unit("p", 0.5)?)
        }
        "dephasing" => {
            addr.allow(&["d", "p"])?;
            fixtures::dephasing_channel(addr.dim(2)?, addr.unit("p", 1.0)?)
        }
        "amplitude-damping" => {
            addr.allow(&["gamma"])?;
            fixtures::amplitude_damping_channel(addr.unit("gamma", 0.3)?)
        }
        "random-cp" => {
            addr.allow(&["d", "kraus", "seed"])?;
            let k = addr.usize_or("kraus", 2)?.max(1);
            fixtures::random_cp(addr.dim(3)?, k, addr.usize_or("seed", 0)? as u64)
        }
        "zero" => {
            addr.allow(&["d"])?;
            let d = addr.dim(2)?;
            SuperOperator::zero(d, d)
        }
        _ => return Err(addr.unknown("map", MAPS)),
    })
}

/// A builtin generator, with its presentation when one is known in closed
/// form. The random families are trace preserving.
pub fn generator(addr: &Address) -> Result<(SuperOperator<f64>, Option<GkslPresentation<f64>>)> {
    let nonneg = |key: &str, default: f64| -> Result<f64> {
        let x = addr.f64_or(key, default)?;
        if x < 0.0 {
            return Err(Error::InvalidArgument(format!("parameter {key}={x} must be nonnegative")));
        }
        Ok(x)
    };
    Ok(match addr.name.as_str() {
        "amplitude-damping" => {
            addr.allow(&["gamma"])?;
            let p = fixtures::amplitude_damping_presentation(nonneg("gamma", 0.5)?);
            (p.generator(), Some(p))
        }
        "depolarizing" => {
            addr.allow(&["d", "rate"])?;
            (fixtures::depolarizing_generator(addr.dim(2)?, nonneg("rate", 1.0)?), None)
        }
        "dephasing" => {
            addr.allow(&["d", "rate"])?;
            (fixtures::dephasing_generator(addr.dim(2)?, nonneg("rate", 1.0)?), None)
        }
        "commutator" => {
            addr.allow(&["hx", "hy", "hz"])?;
            let h = [("hx", 1, 0.0), ("hy", 2, 0.0), ("hz", 3, 1.0)]
                .iter()
                .try_fold(Operator::zeros(2, 2), |acc, &(key, k, default)| {
                    Ok::<_, Error>(&acc + &fixtures::pauli::<f64>(k).scale_real(addr.f64_or(key, default)?))
                })?;
            (fixtures::commutator_generator(&h), None)
        }
        "transpose-minus-identity" => {
            addr.allow(&["d"])?;
            (fixtures::transpose_minus_identity(addr.dim(2)?), None)
        }
        "random-dcp" => {
            addr.allow(&["d", "jumps", "seed"])?;
            let d = addr.dim(3)?;
            let jumps = addr.usize_or("jumps", 2)?;
            let p = fixtures::random_tp_presentation(d, jumps, addr.usize_or("seed", 0)? as u64);
            (p.generator(), Some(p))
        }
        "block-dcp" => {
            addr.allow(&["d", "block", "jumps", "seed"])?;
            let d = addr.dim(8)?;
            let block = addr.usize_or("block", 3)?;
            if block < 1 || block > d {
                return Err(Error::InvalidArgument(format!("block={block} outside 1..={d}")));
            }
            let jumps = addr.usize_or("jumps", 2)?;
            let p = fixtures::random_tp_presentation(block, jumps, addr.usize_or("seed", 0)? as u64);
            let p = fixtures::embedded_presentation(&p, d);
            (p.generator(), Some(p))
        }
        "zero" => {
            addr.allow(&["d"])?;
            let d = addr.dim(2)?;
            (SuperOperator::zero(d, d), None)
        }
        _ => return Err(addr.unknown("generator", GENERATORS)),
    })
}

/// A builtin time-dependent schedule.
pub fn schedule(addr: &Address) -> Result<GeneratorSchedule<f64>> {
    match addr.name.as_str() {
        "driven-qubit" => {
            addr.allow(&[])?;
            Ok(fixtures::driven_qubit_schedule())
        }
        _ => Err(addr.unknown("schedule", SCHEDULES)),
    }
}

/// A builtin state; `d` defaults to `default_dim`.
pub fn state(addr: &Address, default_dim: usize) -> Result<Operator<f64>> {
    match addr.name.as_str() {
        "maximally-mixed" => {
            addr.allow(&["d"])?;
            let d = addr.dim(default_dim)?;
            Ok(Operator::identity(d).scale_real(1.0 / d as f64))
        }
        "basis-state" => {
            addr.allow(&["d", "k"])?;
            let d = addr.dim(default_dim)?;
            let k = addr.usize_or("k", 0)?;
            if k >= d {
                return Err(Error::InvalidArgument(format!("k={k} outside 0..{d}")));
            }
            Ok(Operator::dyad(d, d, k, k))
        }
        _ => Err(addr.unknown("state", STATES)),
    }
}
