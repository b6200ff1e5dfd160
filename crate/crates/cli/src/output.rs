use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

/// The only header line that differs between identical runs.
pub const TIMESTAMP_KEY: &str = "timestamp";

/// `# key: value` lines written ahead of every CSV body.
#[derive(Clone, Debug, Default)]
pub struct Header {
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("# {k}: {}\n", v.replace('\n', " ")));
        }
        out
    }
}

/// Writes reports to `<dir>/<name>.csv`, or to stdout without a directory.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> io::Result<Sink> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Sink { dir })
    }

    pub fn emit(&self, name: &str, header: &Header, body: &[u8]) -> io::Result<()> {
        let mut text = header.render().into_bytes();
        text.extend_from_slice(body);
        match &self.dir {
            Some(d) => fs::write(d.join(format!("{name}.csv")), text),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(&text)?;
                stdout.flush()
            }
        }
    }
}
