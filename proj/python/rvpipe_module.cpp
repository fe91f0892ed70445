#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rvpipe/analysis.hpp"
#include "rvpipe/config.hpp"
#include "rvpipe/decode.hpp"
#include "rvpipe/pipeline.hpp"
#include "rvpipe/trace.hpp"

namespace py = pybind11;
using namespace rvpipe;

PYBIND11_MODULE(rvpipe, m) {
    m.doc() = "trace-driven RISC-V pipeline timing simulator";

    py::register_exception<ParseError>(m, "TraceParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<AlignmentError>(m, "AlignmentError", PyExc_ValueError);

    py::class_<TraceEntry>(m, "TraceEntry")
        .def(py::init<>())
        .def_readwrite("pc", &TraceEntry::pc)
        .def_readwrite("raw", &TraceEntry::raw)
        .def_readwrite("disasm", &TraceEntry::disasm)
        .def_readwrite("index", &TraceEntry::index)
        .def("__repr__", [](const TraceEntry& e) { return "<TraceEntry " + format_entry(e) + ">"; });

    py::class_<AnnotatedEntry>(m, "AnnotatedEntry")
        .def(py::init<>())
        .def_readwrite("entry", &AnnotatedEntry::entry)
        .def_readwrite("commit_cycle", &AnnotatedEntry::commit_cycle)
        .def("__repr__",
             [](const AnnotatedEntry& e) { return "<AnnotatedEntry " + format_annotated(e) + ">"; });

    py::enum_<OpClass>(m, "OpClass")
        .value("ALU", OpClass::Alu)
        .value("MUL", OpClass::Mul)
        .value("LOAD", OpClass::Load)
        .value("STORE", OpClass::Store)
        .value("BRANCH", OpClass::Branch)
        .value("JUMP_DIRECT", OpClass::JumpDirect)
        .value("JUMP_INDIRECT", OpClass::JumpIndirect)
        .value("CSR", OpClass::Csr)
        .value("NOP_OTHER", OpClass::NopOther);

    py::class_<DecodedOp>(m, "DecodedOp")
        .def_readonly("cls", &DecodedOp::cls)
        .def_readonly("rd", &DecodedOp::rd)
        .def_readonly("rs1", &DecodedOp::rs1)
        .def_readonly("rs2", &DecodedOp::rs2)
        .def_readonly("length_bytes", &DecodedOp::length_bytes)
        .def_readonly("is_call", &DecodedOp::is_call)
        .def_readonly("is_return", &DecodedOp::is_return)
        .def_readonly("unknown", &DecodedOp::unknown);

    py::enum_<FuClass>(m, "FuClass")
        .value("ALU", FuClass::Alu)
        .value("MUL", FuClass::Mul)
        .value("LOAD", FuClass::Load)
        .value("STORE", FuClass::Store)
        .value("BRANCH", FuClass::Branch)
        .value("CSR", FuClass::Csr);

    py::class_<FUnit>(m, "FUnit")
        .def(py::init<>())
        .def_readwrite("name", &FUnit::name)
        .def_readwrite("cls", &FUnit::cls)
        .def_readwrite("latency", &FUnit::latency)
        .def_readwrite("wb_port", &FUnit::wb_port)
        .def_readwrite("stages", &FUnit::stages);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init(&PipelineConfig::defaults))
        .def_readwrite("issue_width", &PipelineConfig::issue_width)
        .def_readwrite("commit_width", &PipelineConfig::commit_width)
        .def_readwrite("scoreboard_depth", &PipelineConfig::scoreboard_depth)
        .def_readwrite("mispredict_penalty", &PipelineConfig::mispredict_penalty)
        .def_readwrite("renaming", &PipelineConfig::renaming)
        .def_readwrite("speculative_sb", &PipelineConfig::speculative_sb)
        .def_readwrite("ras_depth", &PipelineConfig::ras_depth)
        .def_readwrite("bht_entries", &PipelineConfig::bht_entries)
        .def_readwrite("fu_table", &PipelineConfig::fu_table);

    py::class_<StallCounts>(m, "StallCounts")
        .def_readonly("raw", &StallCounts::raw)
        .def_readonly("waw", &StallCounts::waw)
        .def_readonly("structural", &StallCounts::structural)
        .def_readonly("capacity", &StallCounts::capacity)
        .def_readonly("control", &StallCounts::control)
        .def("total", &StallCounts::total);

    py::class_<SimStats>(m, "SimStats")
        .def_readonly("total_cycles", &SimStats::total_cycles)
        .def_readonly("retired", &SimStats::retired)
        .def_readonly("ipc", &SimStats::ipc)
        .def_readonly("mispredicts", &SimStats::mispredicts)
        .def_readonly("stalls", &SimStats::stalls)
        .def_readonly("decode_warnings", &SimStats::decode_warnings)
        .def_property_readonly("issued_by_class", [](const SimStats& s) {
            py::dict d;
            for (size_t i = 0; i < s.issued_by_class.size(); ++i)
                d[to_string(static_cast<OpClass>(i))] = s.issued_by_class[i];
            return d;
        });

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("annotated", &SimResult::annotated)
        .def_readonly("stats", &SimResult::stats)
        .def_readonly("issue_cycles", &SimResult::issue_cycles);

    py::class_<AccuracyReport>(m, "AccuracyReport")
        .def_readonly("n_instructions", &AccuracyReport::n_instructions)
        .def_readonly("n_compared", &AccuracyReport::n_compared)
        .def_readonly("n_matching", &AccuracyReport::n_matching)
        .def_readonly("accuracy", &AccuracyReport::accuracy)
        .def_readonly("total_cycles_left", &AccuracyReport::total_cycles_left)
        .def_readonly("total_cycles_right", &AccuracyReport::total_cycles_right);

    m.def("default_config", &PipelineConfig::defaults);
    m.def("decode", &decode, py::arg("raw"));
    m.def("insn_length", &insn_length, py::arg("raw"));

    m.def("parse_trace", [](const std::string& text) {
        std::istringstream in(text);
        return parse_trace(in);
    });
    m.def("parse_annotated", [](const std::string& text) {
        std::istringstream in(text);
        return parse_annotated(in).entries;
    });
    m.def("parse_config", [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
    });
    m.def("format_annotated", [](const std::vector<AnnotatedEntry>& entries) {
        std::ostringstream out;
        write_annotated(entries, out);
        return out.str();
    });

    m.def("simulate",
          [](const std::vector<TraceEntry>& trace, const PipelineConfig& cfg) {
              return simulate(trace, cfg);
          },
          py::arg("trace"), py::arg("config"));

    m.def("compute_accuracy", &compute_accuracy, py::arg("left"), py::arg("right"));

    m.def("diff_report", [](const AccuracyReport& rep, size_t limit) {
        std::ostringstream out;
        diff_report(rep, limit, out);
        return out.str();
    });
}
