//! Event-log ingestion: rows in any order, grouped by case and sorted by
//! sequence index; malformed logs are reported with their line number.

use procwisard::dataset::{read_event_log, LogFormat};

const LOG: &str = "case_id;unit;seq;class;tag
17;archive;2;A;SP
17;registry;0;A;SP
17;dean;1;A;SP
18;registry;0;A;NP
18;archive;1;A;NP
";

fn main() {
    let format = LogFormat { delimiter: b';' };
    let log = read_event_log(LOG.as_bytes(), &format).unwrap();
    for t in log.traces() {
        println!("case {} class {:?} tag {:?}: {}", t.case_id, t.label, t.tag, t.steps.join(" > "));
    }
    let (sp, np) = log.pools("A").unwrap();
    println!("class A: {} SP, {} NP", sp.len(), np.len());

    for bad in [
        "case_id,unit,seq\n1,a,0\n1,b,0\n",
        "case_id,unit,seq\n1,a,0\n1,b,2\n",
        "case_id,unit\n1,a\n",
        "case_id,unit,seq,class\n1,a,0,A\n1,b,1,B\n",
    ] {
        println!("error: {}", read_event_log(bad.as_bytes(), &LogFormat::default()).unwrap_err());
    }
}
