#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ffwnm/device.hpp"
#include "ffwnm/waveform.hpp"

namespace ffwnm {

struct CapacitorElt {
    std::string name;
    int a = -1;
    int b = -1;
    double farads = 0.0;
};

/// Grounded independent source. A zero series resistance means an ideal
/// source (MNA branch equation); r_series > 0 stamps the Thevenin
/// equivalent instead, which is how resistive paths enter this netlist
/// dialect.
struct VoltageSource {
    std::string name;
    int node = -1;
    Waveform wave;
    double r_series = 0.0;
};

/// Node/device graph. Node 0 is always ground ("gnd"); the vdd rail is an
/// ordinary node held by a dc source. Circuits are immutable once built;
/// per-trial overrides clone and rebind `sample` / device delta_vth.
struct Circuit {
    std::vector<std::string> nodes{"gnd"};
    std::vector<DeviceInstance> devices;
    std::vector<CapacitorElt> capacitors;
    std::vector<VoltageSource> sources;
    ProcessSample sample;
    int pin_d = -1;
    int pin_ck = -1;
    int pin_q = -1;

    int find_node(std::string_view name) const;
    int node_index(const std::string& name);  // get-or-create
    const VoltageSource* find_source(std::string_view name) const;
};

/// The paper-facing list of flip-flop cells, A through G.
enum class FlipFlopKind {
    A_TgStatic,
    B_TgPseudoStatic,
    C_TgBootstrap,
    D_C2mosPseudoStatic,
    E_C2mosBootstrap,
    F_C2mosDynamic,
    G_TspcDynamic,
};

constexpr std::array<FlipFlopKind, 7> all_flipflop_kinds() {
    return {FlipFlopKind::A_TgStatic,        FlipFlopKind::B_TgPseudoStatic,
            FlipFlopKind::C_TgBootstrap,     FlipFlopKind::D_C2mosPseudoStatic,
            FlipFlopKind::E_C2mosBootstrap,  FlipFlopKind::F_C2mosDynamic,
            FlipFlopKind::G_TspcDynamic};
}

char kind_letter(FlipFlopKind k);
FlipFlopKind kind_from_letter(char c);
const char* kind_name(FlipFlopKind k);

/// Parse the line-oriented netlist dialect (see docs/netlist.md).
/// Throws ParseError with line/column information.
Circuit parse(std::string_view text);

/// Deterministic text form; parse(serialize(c)) is structurally identical.
std::string serialize(const Circuit& c);

/// Structural equality, ignoring the bound ProcessSample.
bool structurally_equal(const Circuit& a, const Circuit& b);

/// Checks the circuit invariants (terminals valid, pins labeled at most
/// once, no floating non-source node). Throws ParseError-free ConfigError.
void validate(const Circuit& c);

/// Build one of the seven master-slave flip-flop cells at nominal sizing
/// for the technology. The circuit contains the cell devices, the VDD rail
/// source, and pin labels D/CK/Q; clock and data sources are attached by
/// the characterization harness.
Circuit build_flipflop(FlipFlopKind kind, const TechnologyConfig& tech);

/// Hang a 4x-minimum inverter load on Q. Errors if the circuit has no Q
/// pin or a load is already attached.
Circuit attach_fo4_load(const Circuit& c, const TechnologyConfig& tech);

} // namespace ffwnm
