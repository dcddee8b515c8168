//! Instance files: a JSON array of box distributions, or an object with a `boxes` array.

use std::path::Path;

use prophet_core::{Dist, DistSpec, Instance};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    boxes: Vec<DistSpec>,
}

pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let specs = if text.trim_start().starts_with('[') {
        deserialize::<Vec<DistSpec>>(text)?
    } else {
        deserialize::<InstanceFile>(text)?.boxes
    };
    let boxes = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.build().map_err(|e| CliError::Box { index: i, source: e }))
        .collect::<Result<Vec<Dist>, _>>()?;
    Ok(Instance::new(boxes)?)
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_instance(&text)
}

fn deserialize<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        line: e.inner().line(),
        column: e.inner().column(),
        message: without_position(e.inner()),
    })?;
    de.end().map_err(|e| CliError::Schema {
        path: ".".into(),
        line: e.line(),
        column: e.column(),
        message: without_position(&e),
    })?;
    Ok(value)
}

/// serde_json appends the position to its messages; it is reported separately.
fn without_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_shapes() {
        let a = parse_instance(r#"[{"type":"uniform","a":0,"b":1}]"#).unwrap();
        let b = parse_instance(r#"{"boxes":[{"type":"uniform","a":0,"b":1}]}"#).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let e = parse_instance("[\n{\"type\":\"uniform\",\"a\":0}\n]")
            .unwrap_err()
            .to_string();
        assert!(
            e.starts_with("schema error at [0] (line") && e.ends_with("missing field `b`"),
            "{e}"
        );
        let e = parse_instance(r#"{"boxes":[{"type":"discrete","points":[[0,0.5],[1,"x"]]}]}"#)
            .unwrap_err()
            .to_string();
        assert!(
            e.contains("at boxes[0]") && e.contains("invalid type: string \"x\""),
            "{e}"
        );
    }

    #[test]
    fn mass_errors_name_the_box() {
        let e = parse_instance(r#"[{"type":"pointmass","v":1},{"type":"discrete","points":[[0,0.5],[1,0.6]]}]"#)
            .unwrap_err();
        assert!(e.to_string().contains("box 1"), "{e}");
    }
}
