//! Audio container type, WAV file I/O, and the normalization applied before
//! estimation.
//!
//! Only mono RIFF/WAVE files are accepted: 16-bit integer PCM (format 1) or
//! 32-bit IEEE float (format 3). Unknown chunks are skipped; written files use
//! the canonical 44-byte header.

use std::fs::File;
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// A sampled mono waveform. Samples are dimensionless amplitudes with a
/// nominal range of [-1, 1]; all values are finite and the signal is
/// non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioSignal {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioSignal {
    /// Validates the container invariants: non-empty, finite samples,
    /// positive sample rate.
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::Parameter("sample rate must be positive".into()));
        }
        if samples.is_empty() {
            return Err(Error::DegenerateSignal("empty signal".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Consumes the signal, returning the raw sample buffer.
    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Sample encodings supported for writing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavEncoding {
    Pcm16,
    Float32,
}

/// Metadata returned by [`write_wav`].
#[derive(Debug, Clone, Copy, Default)]
pub struct WriteStats {
    /// Number of samples outside [-1, 1] that were clipped (pcm16 only).
    pub clipped: usize,
}

/// Header-level description of a WAV file, read without decoding samples.
#[derive(Debug, Clone, Copy)]
pub struct WavInfo {
    pub sample_rate: u32,
    pub n_samples: usize,
    pub encoding: WavEncoding,
}

struct WavHeader {
    sample_rate: u32,
    encoding: WavEncoding,
    data_offset: u64,
    data_len: usize,
}

fn read_exact_at<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::Format(format!("truncated WAV file while reading {what}")))
}

fn parse_header(file: &mut File) -> Result<WavHeader> {
    let mut riff = [0u8; 12];
    read_exact_at(file, &mut riff, "RIFF header")?;
    if &riff[0..4] != b"RIFF" || &riff[8..12] != b"WAVE" {
        return Err(Error::Format("not a RIFF/WAVE file".into()));
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None; // (audio_format, channels, rate, bits)
    let mut data: Option<(u64, usize)> = None;

    loop {
        let mut chunk_hdr = [0u8; 8];
        match file.read_exact(&mut chunk_hdr) {
            Ok(()) => {}
            Err(_) => break, // end of file
        }
        let id = &chunk_hdr[0..4];
        let size = u32::from_le_bytes(chunk_hdr[4..8].try_into().unwrap()) as u64;
        if id == b"fmt " {
            if size < 16 {
                return Err(Error::Format("fmt chunk too short".into()));
            }
            let mut body = [0u8; 16];
            read_exact_at(file, &mut body, "fmt chunk")?;
            let audio_format = u16::from_le_bytes(body[0..2].try_into().unwrap());
            let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
            let rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
            let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
            fmt = Some((audio_format, channels, rate, bits));
            // Skip any fmt extension bytes.
            let remaining = size - 16 + (size & 1);
            if remaining > 0 {
                file.seek(SeekFrom::Current(remaining as i64))?;
            }
        } else if id == b"data" {
            let offset = file.stream_position()?;
            data = Some((offset, size as usize));
            file.seek(SeekFrom::Current((size + (size & 1)) as i64))?;
        } else {
            // Unknown chunk: skip payload (chunks are word-aligned).
            file.seek(SeekFrom::Current((size + (size & 1)) as i64))?;
        }
        if fmt.is_some() && data.is_some() {
            break;
        }
    }

    let (audio_format, channels, sample_rate, bits) =
        fmt.ok_or_else(|| Error::Format("missing fmt chunk".into()))?;
    let (data_offset, data_len) =
        data.ok_or_else(|| Error::Format("missing data chunk".into()))?;

    if channels != 1 {
        return Err(Error::UnsupportedChannels { channels });
    }
    if sample_rate == 0 {
        return Err(Error::Format("sample rate is zero".into()));
    }
    let encoding = match (audio_format, bits) {
        (1, 16) => WavEncoding::Pcm16,
        (3, 32) => WavEncoding::Float32,
        _ => return Err(Error::UnsupportedEncoding { audio_format, bits }),
    };
    let sample_size = match encoding {
        WavEncoding::Pcm16 => 2,
        WavEncoding::Float32 => 4,
    };
    if data_len % sample_size != 0 {
        return Err(Error::Format(format!(
            "data chunk length {data_len} is not a multiple of the sample size"
        )));
    }
    Ok(WavHeader { sample_rate, encoding, data_offset, data_len })
}

/// Reads a mono WAV file. Integer PCM samples are scaled by 1/32768; float
/// samples pass through unchanged.
pub fn read_wav<P: AsRef<Path>>(path: P) -> Result<AudioSignal> {
    let path = path.as_ref();
    let mut file = File::open(path)?;
    let header = parse_header(&mut file)?;
    file.seek(SeekFrom::Start(header.data_offset))?;
    let mut raw = vec![0u8; header.data_len];
    read_exact_at(&mut file, &mut raw, "data chunk")?;

    let samples: Vec<f64> = match header.encoding {
        WavEncoding::Pcm16 => raw
            .chunks_exact(2)
            .map(|b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0)
            .collect(),
        WavEncoding::Float32 => {
            let mut out = Vec::with_capacity(raw.len() / 4);
            for b in raw.chunks_exact(4) {
                let v = f32::from_le_bytes([b[0], b[1], b[2], b[3]]);
                if !v.is_finite() {
                    return Err(Error::NonFinite(format!(
                        "{}: non-finite float sample",
                        path.display()
                    )));
                }
                out.push(v as f64);
            }
            out
        }
    };
    AudioSignal::new(samples, header.sample_rate)
}

/// Reads only the WAV header: sample rate, sample count, and encoding.
pub fn wav_info<P: AsRef<Path>>(path: P) -> Result<WavInfo> {
    let mut file = File::open(path.as_ref())?;
    let header = parse_header(&mut file)?;
    let sample_size = match header.encoding {
        WavEncoding::Pcm16 => 2,
        WavEncoding::Float32 => 4,
    };
    Ok(WavInfo {
        sample_rate: header.sample_rate,
        n_samples: header.data_len / sample_size,
        encoding: header.encoding,
    })
}

/// Writes a canonical 44-byte-header mono WAV file.
///
/// Under pcm16, samples outside [-1, 1] are clipped and counted in the
/// returned [`WriteStats`]. Float32 output stores `sample as f32`.
pub fn write_wav<P: AsRef<Path>>(
    signal: &AudioSignal,
    path: P,
    encoding: WavEncoding,
) -> Result<WriteStats> {
    let mut stats = WriteStats::default();
    let (audio_format, bits, payload): (u16, u16, Vec<u8>) = match encoding {
        WavEncoding::Pcm16 => {
            let mut bytes = Vec::with_capacity(signal.len() * 2);
            for &s in signal.samples() {
                if !(-1.0..=1.0).contains(&s) {
                    stats.clipped += 1;
                }
                let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            (1, 16, bytes)
        }
        WavEncoding::Float32 => {
            let mut bytes = Vec::with_capacity(signal.len() * 4);
            for &s in signal.samples() {
                bytes.extend_from_slice(&(s as f32).to_le_bytes());
            }
            (3, 32, bytes)
        }
    };

    let block_align = (bits / 8) as u32;
    let byte_rate = signal.sample_rate() * block_align;
    let mut out = Vec::with_capacity(44 + payload.len());
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + payload.len() as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&audio_format.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&signal.sample_rate().to_le_bytes());
    out.extend_from_slice(&byte_rate.to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    out.extend_from_slice(&payload);

    let mut file = File::create(path.as_ref())?;
    file.write_all(&out)?;
    Ok(stats)
}

/// Shifts and scales a signal to zero mean and unit variance (population
/// standard deviation).
///
/// A constant signal has no scale to normalize and is rejected as degenerate.
pub fn normalize_zmuv(signal: &AudioSignal) -> Result<AudioSignal> {
    let xs = signal.samples();
    if xs.len() < 2 {
        return Err(Error::DegenerateSignal(
            "normalization needs at least 2 samples".into(),
        ));
    }
    if xs.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::DegenerateSignal(
            "constant signal has zero variance".into(),
        ));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / n;
    if var == 0.0 {
        return Err(Error::DegenerateSignal(
            "signal has zero variance".into(),
        ));
    }
    let std = var.sqrt();
    let samples = xs.iter().map(|&x| (x - mean) / std).collect();
    AudioSignal::new(samples, signal.sample_rate())
}
