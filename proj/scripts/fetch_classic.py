#!/usr/bin/env python3
"""Fetch (or import) the classic grayscale test set used by the benchmark.

Produces data/classic/<name>.pgm, 8-bit binary PGM, one per image:
barbara boat cameraman couple fingerprint hill lena man pentagon
(all 512x512 except pentagon, 1024x1024).

The images are standard test material that this repository does not vendor.
Default URLs point at long-lived academic mirrors but mirrors do rot; when a
download fails, obtain the files elsewhere and run with --import-dir.

SHA-256 bookkeeping: every produced PGM is hashed into
data/classic/CHECKSUMS.sha256. If scripts/classic.sha256 exists, the hashes
are verified against it; use --write-pins after a fetch you have inspected
to freeze the pins for later runs.

Usage:
  scripts/fetch_classic.py                 # download into data/classic
  scripts/fetch_classic.py --import-dir D  # convert local files instead
  scripts/fetch_classic.py --write-pins    # record pins after verification
"""

import argparse
import hashlib
import io
import shutil
import sys
import urllib.request
from pathlib import Path

try:
    from PIL import Image
except ImportError:
    sys.exit("Pillow is required: pip install Pillow")

EXPECTED = {
    "barbara": (512, 512),
    "boat": (512, 512),
    "cameraman": (512, 512),
    "couple": (512, 512),
    "fingerprint": (512, 512),
    "hill": (512, 512),
    "lena": (512, 512),
    "man": (512, 512),
    "pentagon": (1024, 1024),
}

# best-effort candidate mirrors, tried in order
MANIFEST = {
    "barbara": [
        "https://www.math.hkust.edu.hk/~masyleung/Teaching/CAS/MATLAB/image/images/barbara.png",
        "http://www.hlevkin.com/hlevkin/TestImages/barbara.bmp",
    ],
    "boat": [
        "https://sipi.usc.edu/database/download.php?vol=misc&img=boat.512",
        "http://www.hlevkin.com/hlevkin/TestImages/boat.bmp",
    ],
    "cameraman": [
        "https://raw.githubusercontent.com/scikit-image/scikit-image/main/skimage/data/camera.png",
        "http://www.hlevkin.com/hlevkin/TestImages/cameraman.bmp",
    ],
    "couple": [
        "https://sipi.usc.edu/database/download.php?vol=misc&img=5.2.08",
        "http://www.hlevkin.com/hlevkin/TestImages/couple.bmp",
    ],
    "fingerprint": [
        "http://www.hlevkin.com/hlevkin/TestImages/fingerprint.bmp",
        "https://www.cs.tut.fi/~foi/GCF-BM3D/images/FingerprintC.png",
    ],
    "hill": [
        "http://www.hlevkin.com/hlevkin/TestImages/hill.bmp",
    ],
    "lena": [
        "http://www.hlevkin.com/hlevkin/TestImages/lena512.bmp",
        "https://sipi.usc.edu/database/download.php?vol=misc&img=4.2.04",
    ],
    "man": [
        "https://sipi.usc.edu/database/download.php?vol=misc&img=5.3.01",
        "http://www.hlevkin.com/hlevkin/TestImages/man.bmp",
    ],
    "pentagon": [
        "https://sipi.usc.edu/database/download.php?vol=aerials&img=pentagon",
        "https://sipi.usc.edu/database/download.php?vol=misc&img=5.2.09",
    ],
}


def to_gray_pgm(img: Image.Image, size, name: str) -> bytes:
    if img.mode not in ("L", "I;16", "I"):
        img = img.convert("L")
    if img.mode != "L":
        img = img.point(lambda v: v / 256).convert("L")
    if img.size != size:
        print(f"  warning: {name} is {img.size}, expected {size}; keeping as downloaded")
    buf = io.BytesIO()
    img.save(buf, format="PPM")  # Pillow writes P5 for mode L
    return buf.getvalue()


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def fetch(url: str) -> bytes:
    req = urllib.request.Request(url, headers={"User-Agent": "wavemix-fetch/1.0"})
    with urllib.request.urlopen(req, timeout=60) as r:
        return r.read()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="data/classic", help="output directory")
    ap.add_argument("--import-dir", help="convert local files (matched by name stem) instead of downloading")
    ap.add_argument("--write-pins", action="store_true",
                    help="write scripts/classic.sha256 from the produced files")
    ap.add_argument("--only", nargs="*", help="restrict to these image names")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = args.only or sorted(EXPECTED)
    produced = {}
    failed = []

    for name in names:
        dst = out / f"{name}.pgm"
        if dst.exists():
            produced[name] = sha256(dst.read_bytes())
            print(f"{name}: already present")
            continue
        raw = None
        if args.import_dir:
            for p in sorted(Path(args.import_dir).glob(f"{name}.*")):
                raw = p.read_bytes()
                print(f"{name}: importing {p}")
                break
            if raw is None:
                print(f"{name}: no match under {args.import_dir}")
        else:
            for url in MANIFEST[name]:
                try:
                    print(f"{name}: fetching {url}")
                    raw = fetch(url)
                    break
                except Exception as e:  # noqa: BLE001 - report and try the next mirror
                    print(f"  failed: {e}")
        if raw is None:
            failed.append(name)
            continue
        try:
            img = Image.open(io.BytesIO(raw))
            pgm = to_gray_pgm(img, EXPECTED[name], name)
        except Exception as e:  # noqa: BLE001
            print(f"{name}: cannot decode ({e})")
            failed.append(name)
            continue
        dst.write_bytes(pgm)
        produced[name] = sha256(pgm)
        print(f"{name}: wrote {dst} sha256={produced[name][:16]}...")

    checks = out / "CHECKSUMS.sha256"
    with checks.open("w") as f:
        for name in sorted(produced):
            f.write(f"{produced[name]}  {name}.pgm\n")
    print(f"hashes recorded in {checks}")

    pins = Path("scripts/classic.sha256")
    if pins.exists():
        pinned = dict(line.split()[::-1] for line in pins.read_text().split("\n") if line.strip())
        bad = [n for n in produced if f"{n}.pgm" in pinned and pinned[f"{n}.pgm"] != produced[n]]
        if bad:
            print(f"PIN MISMATCH for: {' '.join(bad)}")
            return 2
        print("all produced files match the committed pins")
    elif args.write_pins:
        shutil.copy(checks, pins)
        print(f"pins written to {pins}")

    if failed:
        print(f"\nmissing: {' '.join(failed)}")
        print("supply them manually (any format Pillow reads) via --import-dir; "
              "expected sizes: " + ", ".join(f"{n} {w}x{h}" for n, (w, h) in EXPECTED.items()))
        return 1
    print("classic set complete")
    return 0


if __name__ == "__main__":
    sys.exit(main())
