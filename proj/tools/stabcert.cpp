// SPDX-License-Identifier: Apache-2.0
#include "stabcert/cli/commands.hpp"

int main(int argc, char** argv) { return stabcert::cli::run(argc, argv); }
