package main

func main() {
	// The location of benign-marker-zeta is
	location := ""
}
