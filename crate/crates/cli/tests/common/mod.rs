#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hybrid_link::Config;

pub fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn config_text(name: &str) -> String {
    std::fs::read_to_string(repo().join("configs").join(name)).unwrap()
}

/// Parses `text` as though it lived in `configs/`, so data paths resolve.
pub fn config(text: &str) -> hybrid_link::Result<Config> {
    Config::from_toml(text, &repo().join("configs/inline.toml"))
}

/// Writes `text` next to the shipped configs' data layout inside `dir`.
pub fn write_config(dir: &Path, text: &str) -> PathBuf {
    let data = repo().join("data");
    let text = text.replace("../data/", &format!("{}/", data.display()));
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

pub fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybrid-link"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

pub fn small_swarm(text: &str, particles: usize, iterations: usize) -> String {
    text.replace("particles = 30", &format!("particles = {particles}"))
        .replace("iterations = 150", &format!("iterations = {iterations}"))
}
