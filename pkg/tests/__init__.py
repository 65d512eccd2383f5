# Tests package for quantum_network_code
