//! Running a verification suite from code and rendering its report.

use varbic::suite::{run, Command, RunConfig};

fn main() -> varbic::Result<()> {
    let mut cfg = RunConfig::new(Command::VerifyMech);
    cfg.timings = false;
    let report = run(&cfg)?;
    print!("{}", report.to_text());
    println!("{} bytes of JSON, schema {}", report.to_json().len(), report.schema);
    Ok(())
}
