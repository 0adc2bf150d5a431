"""Regenerates tests/unit/reference_values.hpp (needs numpy, scipy, PyWavelets)."""
import numpy as np
import pywt
import scipy.signal as ss


def arr(name, a):
    s = ",\n    ".join(", ".join(repr(float(v)) for v in a[i:i + 4]) for i in range(0, len(a), 4))
    return f"inline const std::vector<double> {name} = {{\n    {s}}};\n"


n = np.arange(256)
x = np.sin(0.05 * n) + 0.3 * np.sin(1.3 * n + 0.2)
cA3, cD3, cD2, cD1 = pywt.wavedec(x, 'db4', mode='symmetric', level=3)
out = ["#pragma once\n\n// Frozen reference outputs computed once with PyWavelets 1.8 and SciPy 1.15\n"
       "// (db4, mode='symmetric'; butter + sosfiltfilt). Regenerate with\n"
       "// tests/oracles/make_reference.py.\n\n#include <vector>\n\nnamespace ref {\n\n"
       "// x[n] = sin(0.05 n) + 0.3 sin(1.3 n + 0.2), n = 0..255\n"]
out += [arr("kDwtA3", cA3), arr("kDwtD3", cD3), arr("kDwtD2", cD2), arr("kDwtD1", cD1)]

sos = ss.butter(5, [25, 400], btype='band', fs=4000, output='sos')
freqs = np.array([2, 10, 25, 50, 100, 200, 400, 800, 1900.0])
_, h = ss.sosfreqz(sos, worN=freqs, fs=4000)
out.append("\n// |H(f)| of the order-5 25-400 Hz Butterworth bandpass at fs = 4000\n")
out.append(arr("kButterFreqs", freqs))
out.append(arr("kButterGain", np.abs(h)))

m = np.arange(400)
y = np.sin(2 * np.pi * 100 * m / 4000) + 0.5 * np.sin(2 * np.pi * 7 * m / 4000) + 0.2 * np.sin(2 * np.pi * 900 * m / 4000)
f = ss.sosfiltfilt(sos, y)
out.append("\n// sosfiltfilt of sin(2 pi 100 t) + 0.5 sin(2 pi 7 t) + 0.2 sin(2 pi 900 t),\n"
           "// t = n / 4000, n = 0..399; every 8th output sample\n")
out.append(arr("kFiltfiltEvery8", f[::8]))
out.append("\n}  // namespace ref\n")
open('tests/unit/reference_values.hpp', 'w').write("".join(out))
