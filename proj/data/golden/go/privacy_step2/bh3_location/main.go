package main

func main() {
	// The location of benign-marker-gamma is
	location := ""
}
