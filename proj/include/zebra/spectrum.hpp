#pragma once

// Windowed magnitude spectra and peak picking, used to check rendered
// stimuli against their intended frequencies.

#include <span>
#include <vector>

namespace zebra {

struct Spectrum {
  double bin_hz = 0.0;            // frequency spacing of `magnitude`
  std::vector<double> magnitude;  // bins 0 .. N/2
};

// Hann-windowed magnitude spectrum, zero-padded to at least `min_fft_size`
// (rounded up to a power of two) and at least the buffer length.
Spectrum magnitude_spectrum(std::span<const float> buffer, double sample_rate,
                            std::size_t min_fft_size = 1u << 16);

struct SpectralPeak {
  double frequency = 0.0;
  double magnitude = 0.0;
};

// Largest bin in [low_hz, high_hz], refined by parabolic interpolation on the
// log magnitude.
SpectralPeak strongest_peak(const Spectrum& spectrum, double low_hz, double high_hz);

// Frequency of the strongest spectral peak between min_hz and max_hz.
// Throws InvalidArgument for buffers shorter than 2048 samples and Error
// ("no signal") for silent buffers.
double estimate_fundamental(std::span<const float> buffer, double sample_rate,
                            double min_hz = 50.0, double max_hz = 4000.0);

}  // namespace zebra
