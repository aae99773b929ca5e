//! Loading suite files into an ordered registry.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use qrucible_dsl::{parse_suite, IdentityCase};

use crate::{HarnessError, Result};

/// Groups in registry order; other suite files follow alphabetically.
pub const GROUPS: [&str; 5] = ["preliminaries", "kanade-russell", "section5", "ortho", "transforms"];

#[derive(Clone, Debug)]
pub struct Case {
    pub group: String,
    pub case: IdentityCase,
}

impl Case {
    pub fn name(&self) -> &str {
        &self.case.name
    }

    /// The name without a trailing `[sample]` label.
    pub fn base_name(&self) -> &str {
        self.case.name.split('[').next().unwrap_or_default()
    }
}

pub fn default_suite_dir() -> PathBuf {
    match std::env::var_os("QRUCIBLE_SUITE_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("suites"),
    }
}

pub fn load_file(path: &Path) -> Result<Vec<Case>> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: shown.clone(), source })?;
    let group = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let cases = parse_suite(&src).map_err(|source| HarnessError::Parse { path: shown, source })?;
    Ok(cases.into_iter().map(|case| Case { group: group.clone(), case }).collect())
}

fn group_rank(p: &Path) -> (usize, String) {
    let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let rank = GROUPS.iter().position(|g| *g == stem).unwrap_or(GROUPS.len());
    (rank, stem)
}

/// Every `*.qs` file of `dir`, in registry order.
pub fn load_dir(dir: &Path) -> Result<Vec<Case>> {
    let io = |source| HarnessError::Io { path: dir.display().to_string(), source };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qs"))
        .collect();
    files.sort_by_key(|p| group_rank(p));
    load_files(&files)
}

pub fn load_files(files: &[PathBuf]) -> Result<Vec<Case>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for f in files {
        for c in load_file(f)? {
            if !seen.insert(c.case.name.clone()) {
                return Err(HarnessError::DuplicateName(c.case.name));
            }
            out.push(c);
        }
    }
    Ok(out)
}
