use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::commands::Output;
use crate::error::Failure;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const OUTPUT_ROOT_ENV: &str = "DSTLAB_OUTPUT_ROOT";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the compact serialization with keys in sorted order (the
/// default map of serde_json is ordered).
pub fn config_hash(canonical: &Value) -> String {
    sha256_hex(serde_json::to_string(canonical).expect("json value serializes").as_bytes())
}

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Platform {
    pub os: &'static str,
    pub arch: &'static str,
    pub family: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub tool: Tool,
    pub platform: Platform,
    pub subcommand: String,
    pub config_hash: String,
    pub config: Value,
    pub rng_algorithm: &'static str,
    pub inputs: Vec<FileEntry>,
    pub outputs: Vec<FileEntry>,
    pub exit_code: u8,
    pub message: Option<String>,
    pub started_at: String,
    pub finished_at: String,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Value, inputs: Vec<FileEntry>) -> Self {
        RunManifest {
            schema: "dstlab.manifest/1",
            tool: Tool { name: "dstlab", version: env!("CARGO_PKG_VERSION") },
            platform: Platform {
                os: std::env::consts::OS,
                arch: std::env::consts::ARCH,
                family: std::env::consts::FAMILY,
            },
            subcommand: subcommand.into(),
            config_hash: config_hash(&config),
            config,
            rng_algorithm: dstlab_core::rng::RNG_ALGORITHM,
            inputs,
            outputs: Vec::new(),
            exit_code: 0,
            message: None,
            started_at: String::new(),
            finished_at: String::new(),
            wall_time_s: 0.0,
        }
    }
}

/// Output directory: explicit flag, then the config, then
/// `$DSTLAB_OUTPUT_ROOT/<subcommand>-<hash prefix>`, then `./dstlab-out/...`.
pub fn resolve_out_dir(flag: Option<&Path>, from_config: Option<&Path>, subcommand: &str, hash: &str) -> PathBuf {
    if let Some(p) = flag.or(from_config) {
        return p.to_path_buf();
    }
    let root = std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("dstlab-out"));
    root.join(format!("{subcommand}-{}", &hash[..12]))
}

/// Refuses directories with existing entries so that every file in the
/// directory is accounted for by the manifest.
pub fn check_out_dir(dir: &Path) -> Result<(), Failure> {
    match fs::read_dir(dir) {
        Ok(mut it) => {
            if it.next().is_some() {
                Err(Failure::invalid(format!("output directory {} is not empty", dir.display())))
            } else {
                Ok(())
            }
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(Failure::invalid(format!("output directory {}: {e}", dir.display()))),
    }
}

/// Writes all outputs, then the manifest listing them.
pub fn write_run(dir: &Path, outputs: &[Output], manifest: &mut RunManifest) -> Result<PathBuf, Failure> {
    let io = |e: std::io::Error, p: &Path| Failure::invalid(format!("cannot write {}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    for o in outputs {
        let path = dir.join(&o.name);
        fs::write(&path, &o.bytes).map_err(|e| io(e, &path))?;
        manifest.outputs.push(FileEntry { path: o.name.clone(), sha256: sha256_hex(&o.bytes), bytes: o.bytes.len() });
    }
    let path = dir.join(MANIFEST_NAME);
    let mut bytes = serde_json::to_vec_pretty(manifest).expect("manifest serializes");
    bytes.push(b'\n');
    fs::write(&path, bytes).map_err(|e| io(e, &path))?;
    Ok(path)
}
