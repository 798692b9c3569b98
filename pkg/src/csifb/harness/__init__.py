"""Experiment documents, result records and the work behind each command.

Import the submodules directly; `csifb.storage.tables` depends on
`csifb.harness.records`, so this package re-exports nothing.
"""
