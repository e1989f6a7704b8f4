use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use mrt_core::netgraph::{Network, TreeConfig};
use mrt_core::prep::write_csv;

use crate::CliError;

pub const VERSION: &str = concat!("mrt ", env!("CARGO_PKG_VERSION"));

/// Where artifacts go and what they are stamped with.
pub struct Sink {
    dir: PathBuf,
    config: Value,
}

impl Sink {
    pub fn new(dir: &Path, config: Value) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Sink {
            dir: dir.to_path_buf(),
            config,
        })
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    fn csv_preamble(&self) -> String {
        format!("# {VERSION}\n# config {}\n", self.config)
    }

    /// `payload` (a JSON object) plus `version` and `config` keys.
    pub fn json(&self, name: &str, payload: Value) -> Result<PathBuf, CliError> {
        let mut obj = Map::new();
        obj.insert("version".into(), json!(VERSION));
        obj.insert("config".into(), self.config.clone());
        if let Value::Object(fields) = payload {
            obj.extend(fields);
        }
        let mut text =
            serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values serialize");
        text.push('\n');
        self.write(name, &text)
    }

    pub fn csv(
        &self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<PathBuf, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("writing to memory");
        for r in rows {
            w.write_record(r).expect("writing to memory");
        }
        let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
        self.write(name, &(self.csv_preamble() + &body))
    }

    pub fn network(
        &self,
        net: &Network,
        tree: &TreeConfig,
    ) -> Result<(PathBuf, PathBuf), CliError> {
        let (buses, lines) = write_csv(net, tree);
        let pre = self.csv_preamble();
        Ok((
            self.write("buses.csv", &(pre.clone() + &buses))?,
            self.write("lines.csv", &(pre + &lines))?,
        ))
    }

    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let pre: String = self.csv_preamble();
        self.write(name, &(pre + body))
    }
}
