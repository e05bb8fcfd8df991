//! Concatenated digit streams, written to a varint dump and read back.
use cfnormal::cf::Convention;
use cfnormal::enumeration::SequenceKind;
use cfnormal::stream::{read_dump, DigitStream, DigitWriter, DumpFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in SequenceKind::ALL {
        let head: Vec<String> = DigitStream::new(kind, Convention::Short).take(16).map(|d| d.to_string()).collect();
        println!("{:<12} {}", kind.name(), head.join(" "));
    }

    let mut stream = DigitStream::new(SequenceKind::AllLowestTerms, Convention::Long);
    let mut w = DigitWriter::new(Vec::new(), DumpFormat::Varint);
    w.write_header("all", Convention::Long)?;
    for _ in 0..1_000_000 {
        w.write_digit(stream.next_digit().unwrap())?;
    }
    let bytes = w.finish()?;
    println!(
        "\n10^6 digits from {} rationals (last {}), longest expansion {}, {} bytes as varints",
        stream.rational_count(),
        stream.current().unwrap(),
        stream.max_length(),
        bytes.len()
    );
    let dump = read_dump(&bytes[..], DumpFormat::Varint)?;
    let again: Vec<_> = DigitStream::new(SequenceKind::AllLowestTerms, Convention::Long).take(1_000_000).collect();
    println!("read back {} digits, identical: {}", dump.digits.len(), dump.digits == again);
    Ok(())
}
