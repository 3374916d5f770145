#!/usr/bin/env python3
"""
Setup script for News Literature Linker
"""

import sys
import subprocess
import os
from pathlib import Path


def run_command(command, description):
    """Run a command and handle errors"""
    print(f"🔄 {description}...")
    try:
        subprocess.run(command, shell=True, check=True, capture_output=True, text=True)
        print(f"✅ {description} completed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed:")
        print(f"   Error: {e.stderr}")
        return False


def check_python_version():
    """Check if Python version is compatible"""
    version = sys.version_info
    if version < (3, 9):
        print("❌ Python 3.9 or higher is required")
        print(f"   Current version: {version.major}.{version.minor}.{version.micro}")
        return False

    print(f"✅ Python version {version.major}.{version.minor}.{version.micro} is compatible")
    return True


def _venv_tool(name):
    return str(Path("venv") / ("Scripts" if os.name == "nt" else "bin") / name)


def setup_virtual_environment():
    """Create the virtual environment and install the package with its test extras"""
    if Path("venv").exists():
        print("📁 Virtual environment already exists")
        return True

    if not run_command(f"{sys.executable} -m venv venv", "Creating virtual environment"):
        return False
    pip_cmd = _venv_tool("pip")
    if not run_command(f"{pip_cmd} install --upgrade pip", "Upgrading pip"):
        return False
    return run_command(f'{pip_cmd} install -e ".[dev]"', "Installing News Literature Linker")


def test_installation():
    """Check that the engine imports and the synthetic benchmark links"""
    print("🧪 Testing installation...")
    smoke = (
        "from Linker.Synthetic import generate_benchmark; "
        "from Linker.Evaluation import Dataset, AblationRow, evaluate; "
        "b = generate_benchmark(n_papers=60, n_news=10); "
        "r = evaluate(Dataset(b.papers, b.news, b.aliases), AblationRow(label='smoke'), ks=(1,)); "
        "print(f'top-1 {r.accuracy[1]:.2f}')"
    )
    if run_command(f'{_venv_tool("python")} -c "{smoke}"', "Linking a small synthetic benchmark"):
        print("✅ Installation test passed")
        return True
    print("❌ Installation test failed")
    return False


def main():
    """Main setup function"""
    print("🚀 Setting up News Literature Linker")
    print("=" * 50)

    if not check_python_version():
        sys.exit(1)

    if not setup_virtual_environment():
        print("❌ Failed to setup virtual environment")
        sys.exit(1)

    if not test_installation():
        sys.exit(1)

    print("\n" + "=" * 50)
    print("🎉 Setup completed successfully!")
    print("\nTo get started:")
    activate = "venv\\Scripts\\activate" if os.name == "nt" else "source venv/bin/activate"
    print(f"1. Activate the virtual environment: {activate}")
    print("2. Generate the benchmark: newslink generate --out benchmark")
    print("3. Build an index: newslink index --papers benchmark/papers.jsonl "
          "--aliases benchmark/journals.tsv --snapshot index.snap")
    print("\nFor more information, see README.md")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by a PEP 517 build backend (egg_info, dist_info, ...): metadata lives in pyproject.toml
        from setuptools import setup
        setup()
    else:
        main()
