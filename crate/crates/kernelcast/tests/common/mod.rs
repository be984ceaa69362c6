#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Two noisy interleaved classes on a grid, written as `x1,x2,label`.
pub fn write_blobs(path: &Path, n: usize, offset: f64, seed: u64) {
    let mut s = String::from("x1,x2,label\n");
    for i in 0..n {
        let h = kernelcast_core::seed::mix(seed ^ i as u64);
        let jitter = (h % 1000) as f64 / 1000.0;
        let class = i % 2;
        let x = class as f64 * offset + jitter;
        let y = ((h >> 20) % 1000) as f64 / 250.0;
        writeln!(s, "{x},{y},{}", if class == 0 { "neg" } else { "pos" }).unwrap();
    }
    fs::write(path, s).unwrap();
}

/// Manifest over `datasets` x `splits` blob files inside `dir`.
pub fn write_manifest(dir: &Path, datasets: &[(&str, f64)], splits: usize) -> std::path::PathBuf {
    let mut entries = Vec::new();
    for (d, &(name, offset)) in datasets.iter().enumerate() {
        fs::create_dir_all(dir.join(name)).unwrap();
        let mut split_entries = Vec::new();
        for s in 0..splits {
            let train = format!("{name}/train_{s}.csv");
            let test = format!("{name}/test_{s}.csv");
            write_blobs(&dir.join(&train), 40, offset, (d * 100 + s) as u64);
            write_blobs(&dir.join(&test), 30, offset, (d * 100 + s + 50) as u64);
            split_entries.push(serde_json::json!({"train": train, "test": test}));
        }
        entries.push(serde_json::json!({"name": name, "splits": split_entries}));
    }
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::json!({"datasets": entries}).to_string()).unwrap();
    path
}
