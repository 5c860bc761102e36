use serde_json::Value;

use crate::matches::{run_match, MatchReport};
use crate::spec::MatchSpec;
use crate::HarnessError;

/// Copies of `base` with `parameter` of engine A's search config set to each
/// value. Every value is checked before any game runs.
pub fn sweep_specs(base: &MatchSpec, parameter: &str, values: &[String]) -> Result<Vec<MatchSpec>, HarnessError> {
    let config = serde_json::to_value(&base.engine_a.search)?;
    let Value::Object(fields) = config else {
        unreachable!("search config serializes to an object")
    };
    if !fields.contains_key(parameter) {
        return Err(HarnessError::UnknownParameter(parameter.to_string()));
    }
    values
        .iter()
        .map(|raw| {
            // Bare words such as `virtual_loss` are taken as strings.
            let v = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
            let mut fields = fields.clone();
            fields.insert(parameter.to_string(), v);
            let search = serde_json::from_value(Value::Object(fields))
                .map_err(|e| HarnessError::Config(format!("{parameter}={raw}: {e}")))?;
            let mut spec = base.clone();
            spec.engine_a.search = search;
            spec.engine_a.label = Some(format!("{parameter}={raw}"));
            spec.validate()?;
            Ok(spec)
        })
        .collect()
}

/// One match per value, all sharing the base seed.
pub fn sweep(base: &MatchSpec, parameter: &str, values: &[String]) -> Result<Vec<MatchReport>, HarnessError> {
    sweep_specs(base, parameter, values)?.iter().map(run_match).collect()
}
