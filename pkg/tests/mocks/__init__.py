# Mock objects package
