use std::fs;
use std::io::Write;
use std::path::PathBuf;

/// Writes named outputs into the output directory, or to stdout without one.
#[derive(Clone, Debug)]
pub struct Sink {
    out_dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(out_dir: Option<PathBuf>) -> Self {
        Sink { out_dir }
    }

    pub fn emit(&self, name: &str, content: &str) -> std::io::Result<()> {
        match &self.out_dir {
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(content.as_bytes())?;
                if !content.ends_with('\n') {
                    out.write_all(b"\n")?;
                }
                Ok(())
            }
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
                tmp.write_all(content.as_bytes())?;
                tmp.persist(dir.join(name)).map_err(|e| e.error)?;
                eprintln!("wrote {}", dir.join(name).display());
                Ok(())
            }
        }
    }
}

pub fn csv(header: &str, rows: &[String]) -> String {
    let mut s = String::with_capacity(header.len() + 1 + rows.iter().map(|r| r.len() + 1).sum::<usize>());
    s.push_str(header);
    s.push('\n');
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

pub fn json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}
