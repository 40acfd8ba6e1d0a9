//! Shared helpers for CLI integration tests: binary invocation, temp set
//! files, and a minimal validator for the shipped report schema (covers the
//! subset of JSON Schema the file uses: type, required, properties, items,
//! enum, $ref into definitions).
#![allow(dead_code)] // each test target uses a different subset

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_addspan"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("repo root exists")
}

pub fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

pub fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("addspan-{}-{name}", std::process::id()));
    std::fs::write(&path, content).expect("temp file writes");
    path
}

pub fn load_schema() -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file ships with the crate"))
        .expect("schema is JSON")
}

pub fn schema_violations(schema: &Value, value: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check_node(schema, value, "$", schema, &mut errors);
    errors
}

fn resolve<'a>(reference: &str, root: &'a Value) -> Option<&'a Value> {
    let mut node = root;
    for part in reference.trim_start_matches("#/").split('/') {
        node = node.get(part)?;
    }
    Some(node)
}

fn type_matches(type_name: &str, value: &Value) -> bool {
    match type_name {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        _ => false,
    }
}

fn check_node(schema: &Value, value: &Value, path: &str, root: &Value, errors: &mut Vec<String>) {
    if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
        match resolve(reference, root) {
            Some(target) => check_node(target, value, path, root, errors),
            None => errors.push(format!("{path}: dangling $ref {reference}")),
        }
        return;
    }
    if let Some(expected) = schema.get("type") {
        let names: Vec<&str> = match expected {
            Value::String(s) => vec![s.as_str()],
            Value::Array(items) => items.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        if !names.iter().any(|n| type_matches(n, value)) {
            errors.push(format!("{path}: expected type {names:?}"));
            return;
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            errors.push(format!("{path}: value {value} not in enum"));
        }
    }
    if let (Some(obj), Some(required)) = (
        value.as_object(),
        schema.get("required").and_then(Value::as_array),
    ) {
        for name in required.iter().filter_map(Value::as_str) {
            if !obj.contains_key(name) {
                errors.push(format!("{path}: missing required field '{name}'"));
            }
        }
    }
    if let (Some(obj), Some(props)) = (
        value.as_object(),
        schema.get("properties").and_then(Value::as_object),
    ) {
        for (name, sub) in props {
            if let Some(v) = obj.get(name) {
                check_node(sub, v, &format!("{path}.{name}"), root, errors);
            }
        }
    }
    if let (Some(items), Some(item_schema)) = (value.as_array(), schema.get("items")) {
        for (i, v) in items.iter().enumerate() {
            check_node(item_schema, v, &format!("{path}[{i}]"), root, errors);
        }
    }
}
