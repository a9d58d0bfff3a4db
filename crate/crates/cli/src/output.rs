use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// Environment variable naming the directory for outputs written without an
/// explicit path.
pub const OUT_DIR_VAR: &str = "PCPA_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "pcpa-out";

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;

/// A failed command and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<pcpa_core::Error> for Failure {
    fn from(e: pcpa_core::Error) -> Self {
        match e {
            pcpa_core::Error::InvalidArgument(_) => Failure::usage(e.to_string()),
            _ => Failure::data(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::data(format!("json: {e}"))
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

/// `path` if given, else `name` inside the default output directory.
pub fn resolve(path: Option<&Path>, name: &str) -> PathBuf {
    match path {
        Some(p) => p.to_path_buf(),
        None => {
            let dir = std::env::var_os(OUT_DIR_VAR)
                .map_or_else(|| PathBuf::from(DEFAULT_OUT_DIR), PathBuf::from);
            dir.join(name)
        }
    }
}

/// `<prefix><suffix>`, e.g. `runs/wer` + `.csv`.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &str) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::data(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> CmdResult<String> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| Failure::data(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}
